"""Model structures on finite lattices: construction, enumeration,
verification, bijections, and Bousfield localization."""

from .core import (
    Arrow, ArrowSet, CarrierMismatchError, FiniteLattice, LatticeError,
    LatticeReport, comparable_arrows, from_leq_pairs, make_chain, make_grid,
    make_product, relation_report, verify_lattice,
)
from .transfer import (
    InternalInconsistencyError, TransferSystem, Wfs, WfsPosetReport,
    complete_system, downward_extension, enumerate_transfer_systems,
    is_saturated, is_transfer_system, left_class, transfer_closure,
    trivial_system, verify_wfs, wfs_from_transfer, wfs_poset,
)
from .model import (
    ContractibleSelection, ExtensionResult, IntervalPartition, ModelReport,
    ModelStructure, PremodelStructure, all_interval_partitions,
    bifibrant_objects, bifibrant_replacement, check_monoidal,
    check_properness, cofibrant_objects, composite_weq,
    extend_selection_general, fibrant_objects, from_selection,
    homotopy_category, interval_partition_of, model_from_premodel,
    premodel_from_wfs_pair, q_min, r_max, restrict_to_block, satisfies_2of3,
    selection_of, trivial_model, verify_model, verify_model_structure,
    weq_classes,
)
from .counting import (
    CountTable, OracleCapError, catalan, count_models, count_premodels,
    count_saturated_chain, count_saturated_grid, count_saturated_oracle,
    enumerate_models, enumerate_premodels, oracle_models,
    oracle_transfer_systems, oracle_wfs, q_over_p_ratio, shapiro,
    shapiro_recurrence_table, shapiro_table,
)
from .paths import (
    DyckPath, Endo, LatticePath, crossings, dyck_to_transfer, model_to_path,
    odot, path_to_endo, path_to_model, phi, phi_inverse, pivot_decompose,
    transfer_to_dyck,
)
from .localize import (
    LocalizationGraph, MappingSpace, apply_step, apply_word,
    identity_is_left_quillen, left_localize, left_quillen_edges,
    localization_graph, mapping_space, right_localize, w_closure,
    w_colocal_objects, w_local_objects, word_str, zigzag_from_trivial,
)
