"""odonf: exact-arithmetic kernel for normal forms of commuting ordinary
differential operators with polynomial coefficients.

Layers, bottom to top:

    coeffs    exact scalars: Q(I), multivariate polynomials, rational functions
    diffop    ordinary differential operators in x and d/dx; operator families
    opalg     the extended operator algebra (dilations, integrations, the
              evaluation projector) and its graded standard form
    schur     graded conjugation: solving [D^4, S] = rhs and normal forms
    normform  vector/matrix presentations and the zero-pattern normalization
    classify  spectral data: curves, resultants, sheaf classes, transfers
    cli       the `odonf` command-line front end
"""

__version__ = "0.1.0"
