"""Quasi-exactly solvable sector of the BC_N Inozemtsev model.

Submodules
----------
elliptic      Weierstrass wp / Jacobi theta evaluation and identity checks
sympoly       exact symmetric-polynomial algebra over pluggable rings
inozemtsev    gauge choices, invariant-space Hamiltonian matrices, spectra
conserved     commuting conserved operators and their restricted matrices
ruijsenaars   difference operator Y_1, theta spaces, non-relativistic limit
degeneration  trigonometric model, its invariant spaces, p -> 0 limits
cli           batch front end
"""

__version__ = "0.1.0"
