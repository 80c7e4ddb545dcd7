"""Variational quantum one-class classifier: python surface of the C++ core."""

from vqocc._core import (
    AnsatzConfig,
    CircuitDescriptor,
    CostKind,
    EncodingKind,
    KpcaModel,
    LabeledDataset,
    OcsvmModel,
    Split,
    Statevector,
    TrainConfig,
    TrainedModel,
    amplitude_encode,
    apply_circuit,
    apply_cz,
    apply_ry,
    build_circuit,
    classify,
    cost,
    depth,
    downsample_16,
    dump_circuit,
    expect_z,
    frqi_encode,
    gradient,
    kpca_fit,
    kpca_score,
    load_digits,
    load_fashion_mnist,
    load_model,
    make_split,
    normalize_unit,
    ocsvm_fit,
    ocsvm_score,
    param_count,
    required_qubits,
    roc_auc,
    roc_curve,
    save_model,
    score,
    svdd_score,
    train,
    two_qubit_count,
    zero_state,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
