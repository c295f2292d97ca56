"""midpredict: dyad-year conflict prediction toolkit.

Two classifier families over seven dyadic political variables: a two-layer
feed-forward network trained by scaled conjugate gradient and a soft-margin
kernel SVM trained by pairwise dual coordinate optimization, plus grid
search with stratified cross-validation, ROC/AUC comparison statistics and
variable-sensitivity reports.
"""

__version__ = "0.1.0"

from ._util import (
    ConvergenceError,
    MidpredictError,
    ParseError,
    TrainingError,
    ValidationError,
)
from .bundle import ModelBundle
from .data import (
    CONFLICT,
    PEACE,
    Dataset,
    DyadRecord,
    balanced_sample,
    generate_synthetic,
    load_dataset,
    write_dataset,
)
from .evaluation import (
    AucComparison,
    ConfusionMatrix,
    RocCurve,
    auc,
    auc_standard_error,
    auc_z_test,
    compare_aucs,
    confusion,
    roc_points,
    score_correlation,
)
from .kernels import KernelSpec, gram_matrix, kernel_eval
from .mlp import MlpClassifier, MlpNetwork, mlp_forward, mlp_loss_grad, mlp_predict
from .model_selection import GridSpec, CvResult, grid_search, kfold_split
from .scaling import DyadScaler, normalize
from .sensitivity import (
    PerturbationReport,
    RankingTable,
    perturbation_report,
    run_extreme_profiles,
    single_variable_ranking,
)
from .serialize import load_model, save_model
from .svm import SvmClassifier, SvmModel, kkt_violation, smo_solve
from .variables import VARIABLE_NAMES, VARIABLES, VariableSpec

__all__ = [
    "CONFLICT",
    "PEACE",
    "AucComparison",
    "ConfusionMatrix",
    "ConvergenceError",
    "CvResult",
    "Dataset",
    "DyadRecord",
    "DyadScaler",
    "GridSpec",
    "KernelSpec",
    "MidpredictError",
    "MlpClassifier",
    "MlpNetwork",
    "ModelBundle",
    "ParseError",
    "PerturbationReport",
    "RankingTable",
    "RocCurve",
    "SvmClassifier",
    "SvmModel",
    "TrainingError",
    "ValidationError",
    "VariableSpec",
    "VARIABLES",
    "VARIABLE_NAMES",
    "auc",
    "auc_standard_error",
    "auc_z_test",
    "balanced_sample",
    "compare_aucs",
    "confusion",
    "generate_synthetic",
    "gram_matrix",
    "grid_search",
    "kernel_eval",
    "kfold_split",
    "kkt_violation",
    "load_dataset",
    "load_model",
    "mlp_forward",
    "mlp_loss_grad",
    "mlp_predict",
    "normalize",
    "perturbation_report",
    "roc_points",
    "run_extreme_profiles",
    "save_model",
    "score_correlation",
    "single_variable_ranking",
    "smo_solve",
    "write_dataset",
]
