# Loading and validating a prompt suite.
#
# Suites are line-delimited JSON, one file per category; the file stem is
# the category token. Records carry the prompt text plus the parsed
# metadata the metrics consume.

import json
import tempfile
from pathlib import Path

from videval import dump_prompt_suite, load_prompt_suite, validate_meta

workdir = Path(tempfile.mkdtemp(prefix="suite-demo-"))
suite_dir = workdir / "suite"
suite_dir.mkdir()

# In[1]: write a small suite by hand
(suite_dir / "spatial.jsonl").write_text(json.dumps({
    "prompt": "A toddler walking on the left of a dog in a park",
    "spatial": "left", "object_1": "toddler", "object_2": "dog",
}) + "\n")
(suite_dir / "numeracy.jsonl").write_text(json.dumps({
    "prompt": "three bees and five butterflies fly around a blooming garden",
    "objects": "bee,butterfly", "numbers": "3,5",
}) + "\n")
(suite_dir / "motion.jsonl").write_text(json.dumps({
    "prompt": "A boat sails to the left on the ocean",
    "object_1": "boat", "d_1": "left", "object_2": "", "d_2": "",
}) + "\n")

# In[2]: load; ids are assigned per category in file order
records = load_prompt_suite(suite_dir)
for record in records:
    print(record.prompt_id, "|", record.category.token, "|", record.meta)

# In[3]: every record re-validates cleanly
for record in records:
    validate_meta(record)
print("all records valid")

# In[4]: canonical round trip is byte stable
out = workdir / "dump"
dump_prompt_suite(records, out)
again = load_prompt_suite(out)
print("round trip equal:", again == records)

# In[5]: invalid metadata is rejected with a named violation
(suite_dir / "numeracy.jsonl").write_text(json.dumps({
    "prompt": "nine cats nap on a porch", "objects": "cat", "numbers": "9",
}) + "\n")
try:
    load_prompt_suite(suite_dir)
except Exception as exc:
    print("rejected:", exc)
