# A full evaluation run, model-free: the miniature 14-prompt suite with its
# canned fixture store, scored end to end, reported, and correlated against
# bundled human ratings.

import tempfile
from pathlib import Path

from videval import FixtureStore, aggregate_human, correlate, evaluate_suite, write_report
from videval.core import EngineConfig, load_prompt_suite
from videval.runner import load_human_ratings
from videval.synth import make_mini_suite

workdir = Path(tempfile.mkdtemp(prefix="e2e-demo-"))

# In[1]: build suite + videos + fixtures + human ratings (pure arithmetic,
# byte-identical on every call)
assets = make_mini_suite(workdir / "assets")
suite = load_prompt_suite(assets.suite_dir)
print("prompts:", len(suite))

# In[2]: evaluate through the fixture store; no models, no network
gateway = FixtureStore(assets.fixtures_dir)
out = workdir / "out"
result = evaluate_suite(assets.model_id, suite, assets.videos_dir, gateway,
                        EngineConfig(), workers=4, out_dir=out)
for category, mean in result.means.items():
    print(f"  {category.token:>13}: {mean:.4f}")
print("coverage:", result.coverage["evaluated"], "of", result.coverage["prompts"])

# In[3]: correlate against the three-annotator human ratings
human, _ = aggregate_human(load_human_ratings(assets.human_csv))
correlations = [correlate(result.records, human, category)
                for category in result.means]
for corr in correlations:
    print(f"  {corr.category.token:>13}: tau={corr.tau:+.3f} rho={corr.rho:+.3f} n={corr.n}")

# In[4]: write the report files
paths = write_report(result.records, {assets.model_id: result.means}, correlations,
                     out, formats=("csv", "json"))
for path in paths:
    print("wrote", path)
print()
print((out / "leaderboard.csv").read_text())
