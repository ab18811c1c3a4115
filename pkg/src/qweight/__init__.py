"""Weight reduction for CSS quantum codes.

The package turns an arbitrary CSS code into one whose stabilizer checks
act on at most 5 qubits and whose qubits participate in at most 6 checks,
by gluing small 2-dimensional cell complexes (combs, grids, cones) along
the code's Tanner graph. A second construction lays the same data out as
a stack of coupled surface-code layers embedded in a 3D grid.

The main entry points re-exported here:

- CssCode, validate, params, tanner_graph: code container and checks
- weight_reduce, ReducedCode, VerificationReport: the reduction pipeline
- build_layer_code, LayerEmbedding, locality_audit: the 3D construction
- cone_over_graph, sparsify_star: cell-complex building blocks
- random_dense_css, hastings_sparse_x, standard_code: input families
- load_code, dump_code: the JSON file format
"""

from qweight.assembler import (
    CHECK_WEIGHT_BOUND,
    QUBIT_WEIGHT_BOUND,
    ReducedCode,
    VerificationError,
    VerificationReport,
    weight_reduce,
)
from qweight.cone import ConeCertificate, cone_over_graph, sparsify_star
from qweight.css import CodeParams, CssCode, params, tanner_graph, validate
from qweight.generators import (
    hastings_sparse_x,
    random_dense_css,
    standard_code,
)
from qweight.io import dump_code, load_code
from qweight.layer_code import (
    STABILIZER_WEIGHT_BOUND,
    LayerEmbedding,
    build_layer_code,
    locality_audit,
)

__version__ = "0.1.0"

__all__ = [
    "CHECK_WEIGHT_BOUND",
    "QUBIT_WEIGHT_BOUND",
    "STABILIZER_WEIGHT_BOUND",
    "CodeParams",
    "ConeCertificate",
    "CssCode",
    "LayerEmbedding",
    "ReducedCode",
    "VerificationError",
    "VerificationReport",
    "build_layer_code",
    "cone_over_graph",
    "dump_code",
    "hastings_sparse_x",
    "load_code",
    "locality_audit",
    "params",
    "random_dense_css",
    "sparsify_star",
    "standard_code",
    "tanner_graph",
    "validate",
    "weight_reduce",
    "__version__",
]
