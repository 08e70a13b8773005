"""Dephasing channels on density matrices and their semigroups.

Conjugating a density matrix by the random modulation M_xi and averaging
multiplies each off-diagonal entry rho[j,k] by chi(p_j - p_k), with chi
the characteristic function of xi.  Diagonals are untouched, so the
channel preserves normality — the output is still a density matrix.  When
the law of xi belongs to a convolution family (Gaussian variance t,
Cauchy scale t) the channels compose additively in t and form a semigroup.
"""

import numpy as np

from atomdyn import (
    ConvolutionFamily,
    Gaussian,
    NormalState,
    averaged_Phi,
    dephasing_kernel,
    semigroup_Phi,
)

# A coherent two-level density matrix with frequencies 0 and 1.
rho = NormalState((0.0, 1.0), np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex))
print("input matrix:")
print(rho.matrix)

out = averaged_Phi(Gaussian(1.0), rho)
print("\nafter Gaussian dephasing (D = 1):")
print(out.matrix)
print(f"off-diagonal factor e^(-1/2) = {np.exp(-0.5):.6f}")

# The action is exactly a Schur product with the chi kernel.
K = dephasing_kernel(Gaussian(1.0), rho.support)
print(f"\nSchur kernel:\n{K.real}")
print(f"entrywise residual: {np.max(np.abs(out.matrix - K * rho.matrix)):.2e}")

# Semigroup in time: dephase(t) then dephase(s) equals dephase(t + s).
fam = ConvolutionFamily("gaussian")
worst = 0.0
for t in (0.1, 0.5, 1.0):
    for s in (0.1, 0.5, 1.0):
        two = semigroup_Phi(fam, t, semigroup_Phi(fam, s, rho)).matrix
        one = semigroup_Phi(fam, t + s, rho).matrix
        worst = max(worst, float(np.max(np.abs(two - one))))
print(f"\nsemigroup residual over a 3x3 (t,s) grid: {worst:.2e}")

# Coherence decays toward the fully dephased diagonal state.
print("\n|rho[0,1]| under the Gaussian family:")
for t in (0.0, 0.5, 1.0, 2.0, 5.0, 20.0):
    m = semigroup_Phi(fam, t, rho).matrix
    print(f"  t = {t:>4.1f}: {abs(m[0, 1]):.6f}")

# Output stays a valid state for random inputs: Hermitian, trace 1, PSD.
gen = np.random.default_rng(3)
a = gen.normal(size=(4, 4)) + 1j * gen.normal(size=(4, 4))
mat = a @ a.conj().T
mat /= np.trace(mat).real
big = NormalState(tuple(np.sort(gen.uniform(-4, 4, 4))), mat)
out = semigroup_Phi(ConvolutionFamily("cauchy"), 0.7, big).matrix
print(f"\n4x4 Cauchy-dephased output: trace = {np.trace(out).real:.12f}, "
      f"min eigenvalue = {np.linalg.eigvalsh(out).min():.2e}")
