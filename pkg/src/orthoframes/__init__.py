"""Orthonormalization of translate and Gabor families through their symbol
functions, with (k,q)-representation checks and a reproduction CLI."""

from .errors import (ConfigError, DegenerateProbe, GridMismatch,
                     NonConvergedQuadrature, NonConvergedSum, NotAFrame,
                     OrthoFramesError, ShapeMismatch, SymbolNotPositive)
from .kqrep import (KQBox, KQRepresentation, completeness_probe, kq_overlaps,
                    kq_transform, orthonormality_criterion, reconstruct)
from .overlaps import (OverlapSequence, coherent_overlaps, gabor_overlaps,
                       translate_overlaps)
from .seedfn import (CosineWindow, GaborAtom, GaussianVacuum, LatticeParams,
                     Rectangle, Sampled, SeedFunction, SmoothBump, UniformGrid,
                     evaluate, fourier_transform_grid, inner_product)
from .symbol import (CoefficientTable, SymbolFunction, build_symbol,
                     check_positive, coefficients, parseval_sum)
from .synth import (GramReport, SynthesizedFunction, apply_XL, gram_example1,
                    gram_example3, gram_oracle, synthesize)
from .translates import (FrameBounds, PeriodizedSpectrum, frame_bounds,
                         mra_orthonormalize, periodized_spectrum)

__version__ = "0.1.0"
