# Judge prompts and rubric scoring.
#
# Each judged category renders a describe turn plus a rubric turn from
# canonical templates; responses are parsed leniently (JSON tolerated
# inside prose) but scores are range-checked strictly.

from videval import (
    EndpointScores,
    Stage,
    action_score,
    consist_attr_score,
    dynamic_attr_score,
    interaction_score,
    parse_option_pair,
    parse_score_json,
    render_prompt,
    transition_credit,
)
from videval.core import Category, ConsistAttrMeta, DynamicAttrMeta

# In[1]: render the two-turn protocol for consistent attributes
meta = ConsistAttrMeta(("a blue car", "a white picket fence"))
print(render_prompt(Category.CONSIST_ATTR, Stage.DESCRIBE, meta))
print(render_prompt(Category.CONSIST_ATTR, Stage.PREDICT, meta))

# In[2]: parse the judge's option answer and map it to a score
answer = '{"option": "A1, B2", "explanation": "fence only intermittent"}'
o1, o2 = parse_option_pair(answer)
print("options:", o1, o2, "-> score", round(consist_attr_score(o1, o2), 4))

# In[3]: numeric rubrics tolerate prose around the JSON
response = 'Sure thing. {"score": 4, "explanation": "one action missing"}'
n = parse_score_json(response, 0, 5)
print("action rubric", n, "->", action_score(n))
print("interaction rubric 3 ->", interaction_score(3))

# In[4]: dynamic attributes blend two endpoint scores with the transition
# credit of the intermediate frames (best fit to a 2 -> 1 step)
labels_clean = [2] * 7 + [1] * 7
labels_static = [2] * 14
print("clean transition credit:", transition_credit(labels_clean))
print("static video credit:", transition_credit(labels_static))
print("dynamic score, perfect video:",
      dynamic_attr_score(EndpointScores(5, 5), labels_clean))
print("dynamic score, static video:",
      dynamic_attr_score(EndpointScores(5, 1), labels_static))
