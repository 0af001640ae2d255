"""Regenerates the recognizer-output fixtures used by the audit tests.

audit_fixture.csv: 1000 synthetic portraits, 144 of them falsely matched.
pairs_fixture.csv: 20 falsely matched identities, genuine photo wins 17.
"""
import random

rng = random.Random(20231)

rows = []
match_slots = set(rng.sample(range(1000), 144))
celeb = 0
for i in range(1000):
    image_id = f"s{i + 1:04d}"
    if i in match_slots:
        celeb += 1
        conf = round(rng.uniform(0.5, 1.0), 4)
        rows.append(f"{image_id},true,Celeb{celeb:03d},{conf}")
    else:
        rows.append(f"{image_id},false,,")
with open("audit_fixture.csv", "w") as f:
    f.write("image_id,matched,identity,confidence\n")
    f.write("\n".join(rows) + "\n")

pairs = []
for k in range(20):
    synthetic = round(rng.uniform(0.55, 0.9), 4)
    if k < 17:
        real = round(min(1.0, synthetic + rng.uniform(0.01, 0.09)), 4)
    else:
        real = round(synthetic - rng.uniform(0.01, 0.05), 4)
    pairs.append(f"Celeb{k + 1:03d},{synthetic},{real}")
rng.shuffle(pairs)
with open("pairs_fixture.csv", "w") as f:
    f.write("identity,synthetic_confidence,real_confidence\n")
    f.write("\n".join(pairs) + "\n")
