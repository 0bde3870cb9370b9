import os
import sys

from magnotherm.sweep import PRESET_NAMES, preset, run_sweep

out_dir = sys.argv[1] if len(sys.argv) > 1 else "presets"

for name in PRESET_NAMES:
    print(name)
    spec = preset(name, output=os.path.join(out_dir, f"{name}.csv"))
    run_sweep(spec, jobs=os.cpu_count() or 1)
