"""Walk through the smallest interesting example: three candidate beliefs
about whether Alex (A) and Chris (C) come to a party, and what a listener
learns from "if A then C".

Everything below is exact rational arithmetic, so the printed fractions
are the model's actual output, not rounded floats.
"""

from condrsa import (
    Softmax,
    argmax_utterances,
    builtin,
    literal_listener,
    pragmatic_listener,
    speaker,
    utterance_surprise,
)

toy = builtin("toy")
ctx = toy.to_context()
labels = [s.label for s in ctx.states]

print("States (probabilities of: both come / only Alex / only Chris / neither):")
for state, weight in zip(ctx.states, ctx.weights):
    cells = ", ".join(str(c) for c in state.table.cells)
    print(f"  {state.label}: [{cells}]   prior {weight}   ({state.relation.value})")

print("\nWhich utterances may the speaker use? (threshold 9/10)")
for i, state in enumerate(ctx.states):
    ok = [str(u) for j, u in enumerate(ctx.utterances) if ctx.assertability[i, j]]
    print(f"  {state.label}: {', '.join(ok)}")

# The literal listener only filters by assertability: hearing the
# conditional, it cannot tell s1 from s2.
print("\nLiteral listener after 'A -> C':")
for label, w in zip(labels, literal_listener(ctx, "A -> C").weights):
    print(f"  {label}: {w}")

# The speaker prefers informative utterances: in s1 she could have said
# the stronger bare "C", so a conditional from her would be a bit lazy.
print("\nSpeaker choice probabilities (rationality 1):")
for label in labels:
    row = ", ".join(f"{u}: {p}" for u, p in speaker(ctx, label).items() if p > 0)
    print(f"  {label}: {row}")
    print(f"    best choice: {[str(u) for u in argmax_utterances(ctx, label)]}")

# The pragmatic listener inverts that reasoning and now favours s2, the
# state where the two attendances actually hang together.
print("\nPragmatic listener after 'A -> C':")
for label, w in zip(labels, pragmatic_listener(ctx, "A -> C").weights):
    print(f"  {label}: {w}")

print("\nHow expected is each utterance a priori?")
for u in ctx.utterances:
    print(f"  {u}: {utterance_surprise(ctx, u)}")

# Cranking rationality up sharpens the same preference.
pl3 = pragmatic_listener(ctx, "A -> C", Softmax(3))
print("\nAt rationality 3 the pull towards s2 strengthens:")
for label, w in zip(labels, pl3.weights):
    print(f"  {label}: {w}")
