"""Run the full pipeline end to end on a generated synthetic corpus.

Writes corpora, a scripted oracle backend, and a run config into
runs/pipeline-demo/, then drives every stage through the CLI entry point:
preprocess -> gen-candidates -> train-selector -> tune -> predict ->
evaluate -> report. With the oracle backend the final report reads 1.0
across all four metrics.

Equivalent shell usage:

    python demos/pipeline_demo.py            # or:
    evex pipeline --config runs/pipeline-demo/config.json
"""

import json
from pathlib import Path

from evex.cli import main
from evex.synthetic import build_demo_run

run_dir = Path("runs/pipeline-demo")
config_path = build_demo_run(run_dir, seed=0, noisy=False)
print(f"wrote synthetic corpus + oracle script + config under {run_dir}/")

rc = main(["pipeline", "--config", str(config_path), "--run-dir", str(run_dir)])
assert rc == 0, f"pipeline failed with exit code {rc}"

report = json.loads((run_dir / "report.json").read_text())
print("\nfinal report (test split):")
for key in ("trig_i", "trig_c", "arg_i", "arg_c"):
    s = report[key]
    print(f"  {key:7s} P={s['precision']:.3f} R={s['recall']:.3f} F1={s['f1']:.3f}")

tuned = json.loads((run_dir / "tuned.json").read_text())
print(f"\ntuned selection: alpha={tuned['alpha']} theta={tuned['theta']}")
print(f"artifacts: {sorted(p.name for p in run_dir.iterdir())}")
