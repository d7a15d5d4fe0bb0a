"""Real components of X_0^+(N) through the coding of closed geodesics.

Modules:
    qform       binary quadratic forms, matrices, exact quadratic numbers
    pell        Pell equations, units and automorphs
    classgroup  class groups, class numbers, Heegner forms, kappa(N)
    coding      the level N fundamental domain, N-cycles and components
    homology    M-symbols and the homology of X_0(N)
    periods     newforms, periods and the multiplier alpha
    plot        arc lists and SVG rendering of N-cycles
    cli         the `realocus` command
"""

__version__ = "0.1.0"
