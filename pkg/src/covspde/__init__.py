"""Covariant first-order SPDEs driven by Levy white noise.

Modules
-------
repcore, covsolve
    Representations of so(D) and the null-space solver for covariant operators.
symcalc
    Symbols, determinants, mass spectra, Green functions and partial fractions.
levynoise, momenteng
    Levy white noise (sampling, characteristic functional, moments) and exact
    moments of SPDE solutions.
latticemc
    Spectral lattice solver and Monte Carlo verification.
flwightman
    Fourier-Laplace structure, mass-shell kernels and convolution identities.
models3d
    The D=3 model catalog and its closed-form regression data.
"""

__version__ = "0.1.0"
