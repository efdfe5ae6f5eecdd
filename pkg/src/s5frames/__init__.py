"""Moving-frame numerics for minimal surfaces in the 5-sphere.

Three layers:

* surface invariants — adapted frames, second fundamental form, Gauss /
  scalar normal curvature, curvature ellipse, superminimality;
* polar bundle — the unit-normal-bundle hypersurface built over a
  minimal surface, its regularity locus, induced metric, shape operator
  and mean-curvature profile, with a grid certificate;
* structure residuals — nullity distribution, connection scalars and
  the derivative identities of degenerate minimal hypersurfaces.

`catalog` holds exact reference immersions, `report`/`cli` drive batch
verification runs.
"""

from . import catalog, errors, intrinsic, invariants, polar, report, structure
from .frames import AdaptedFrame, FramePatch, build_frame, build_normal_frame, build_tangent_frame
from .invariants import (
    CurvatureInvariants,
    SecondFundamentalTensor,
    curvature_ellipse,
    curvature_invariants,
    mean_curvature_vector,
    second_fundamental_form,
    superminimality_check,
)
from .surfaces import ChartDomain, SurfaceImmersion

__version__ = "0.1.0"
