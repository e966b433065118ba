"""kgraphkit: finite higher-rank graphs, cycline pairs, regular paths and
finite models of their Cuntz-Krieger representations."""

from .combos import GeneratorCombo, gauge_rotate
from .cycline import (
    cycline_bruteforce,
    cycline_decide,
    cylinder_equal,
    enumerate_cycline,
    ext,
    onegraph_cycline_oracle,
    per_group,
)
from .errors import *  # noqa: F401,F403
from .infinite import (
    EPPath,
    ThueMorsePath,
    ep_equal,
    ep_path,
    in_F,
    in_interior_F,
    is_regular,
    onegraph_regular_oracle,
    prefix,
    prepend,
    shift,
    tm_path,
)
from .kgraph import GraphBuilder, KGraph, Path, Skeleton, load_graph, validate
from .model import build_basis, eval_upsilon, eval_Upsilon, kernel_probe, op_Q, op_T, verify_CK
from .pullback import p1_project, pullback
from .states import collision_classes, compute_Hx, e_eval, phi_eval, positivity_check, psi_eval, states_equiv

__version__ = "0.1.0"
