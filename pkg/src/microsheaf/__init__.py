"""microsheaf: exact computational homological algebra for cellular sheaves.

Submodules:
    rational    exact matrices over Q
    chaincore   cochain complexes, cohomology, cones, tensor/hom
    ainfty      A-infinity categories and relation checking
    twisted     twisted complexes over an A-infinity category
    hpt         homological perturbation transfer
    simplicial  finite simplicial complexes, cell unions, subdivisions
    sheaves     cellular sheaves, standard/costandard objects, triangles
    resolution  injective resolutions and minimization
    homs        derived homs: injective model, bar model, tube model
    generate    the generation theorem as an algorithm
    morsecat    discrete Morse compression and the Morse category
    charcycle   constructible functions and characteristic cycle checks
    catalog     the shipped test spaces and sheaf/open-set catalogs
    io          JSON document schemas
    cli         command-line driver
"""

from fractions import Fraction as Scalar  # exact ground field element

__version__ = "0.1.0"
__all__ = ["Scalar", "__version__"]
