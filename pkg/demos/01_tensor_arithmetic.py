"""Tour of the truncated tensor algebra: words, products, exp/log, adjoints.

Coefficients live in flat arrays indexed by words over the alphabet
{1, ..., d}, level by level.  Everything below is exact arithmetic on small
examples, printed so the word <-> index layout is visible.
"""

import numpy as np

from pabsig import (
    TruncTensor,
    all_words,
    exp_trunc,
    inner,
    left_adjoint,
    log_trunc,
    mul_trunc,
    right_adjoint,
    tensor_dim,
    unit,
    word_index,
)

d, m = 2, 2
print(f"T^{m}(R^{d}) has {tensor_dim(d, m)} coefficients, ordered by word:")
print("  " + "  ".join("e" + "".join(map(str, w)) if w else "1"
                       for w in all_words(d, m)))

e1 = TruncTensor(d, m, np.eye(tensor_dim(d, m))[word_index((1,), d)])
e2 = TruncTensor(d, m, np.eye(tensor_dim(d, m))[word_index((2,), d)])

print("\nexp(e1) =", exp_trunc(e1).coeffs)
print("exp(e2) =", exp_trunc(e2).coeffs)

g = mul_trunc(exp_trunc(e1), exp_trunc(e2))
print("\nexp(e1) (x) exp(e2) =", g.coeffs)
print("its log            =", log_trunc(g).coeffs)
print("(the level-2 part is the commutator [e1,e2]/2: +0.5 e12, -0.5 e21)")

print("\n<exp(e1), exp(e1)> =", inner(exp_trunc(e1), exp_trunc(e1)),
      " (= 1 + 1 + 1/4)")

# adjoints remove prefixes / suffixes and are dual to multiplication
e12 = TruncTensor(d, m, np.eye(tensor_dim(d, m))[word_index((1, 2), d)])
print("\nleft_adjoint(e1, e12)  =", left_adjoint(e1, e12).coeffs,
      " (strip prefix 1 -> e2)")
print("right_adjoint(e2, e12) =", right_adjoint(e2, e12).coeffs,
      " (strip suffix 2 -> e1)")

rng = np.random.default_rng(0)
a, b, c = (TruncTensor(d, m, rng.standard_normal(tensor_dim(d, m)))
           for _ in range(3))
lhs = inner(mul_trunc(a, b), c)
print("\nduality on a random triple:")
print("  <a (x) b, c>            =", lhs)
print("  <b, left_adjoint(a, c)> =", inner(b, left_adjoint(a, c)))
print("  <a, right_adjoint(b, c)>=", inner(a, right_adjoint(b, c)))

one = unit(d, m)
assert mul_trunc(one, a).coeffs.tolist() == a.coeffs.tolist()
print("\nunit element acts as identity: checked.")
