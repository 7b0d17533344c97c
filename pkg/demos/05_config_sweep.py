# %% [markdown]
# # Config-driven sweeps
#
# The runner reads an INI config, expands the sweep axes, skips invalid
# points with a reason, and writes one CSV per run plus JSON reports and a
# manifest. The `akrwalk sweep --config ...` CLI does the same.

# %%
import json
import tempfile
from pathlib import Path

from akrwalk.runner import execute, parse_config, read_metrics_csv

out = Path(tempfile.mkdtemp(prefix="akrwalk-sweep-"))
config = parse_config(f"""
[grid]
horizon = 120

[placement]
kind = block
k = 4

[sweep]
n = 16, 24, 32
k = 4, 9, 16
mode = grouped-vs-distributed
workers = 2

[output]
directory = {out}
""")
manifest = execute(config)
for entry in manifest.runs:
    print(entry["summary"].splitlines()[-1], "|", entry["tag"])
for skip in manifest.skipped:
    print("skipped:", skip)

# %%
first_csv = manifest.files[0]
rows = read_metrics_csv(first_csv)
print(first_csv, len(rows), "rows; first:", rows[0])
print(json.dumps(json.loads(Path(manifest.path).read_text())["config"], indent=1))
