# Output locations
OUTPUT_DIR_ENV_VAR = "PERSFL_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "results"
MANIFEST_FILENAME = "manifest.json"
PER_SEED_DIRNAME = "per_seed"
FEDERATION_README_FILENAME = "_FEDERATION_README.md"

# Independent random streams split off one master seed (SeedSequence spawn keys)
CLUSTER_PARAMS_STREAM = 0
FEATURES_STREAM = 1
NOISE_STREAM = 2
TEST_SET_STREAM = 3
VALIDATION_STREAM = 4
CANDIDATE_SAMPLING_STREAM = 5
ONLINE_BATCH_STREAM = 6
IFCA_INIT_STREAM = 7
ORACLE_SAMPLING_STREAM = 8

# Numerics
CSV_FLOAT_FORMAT = "%.12g"
# lossless, so a saved federation loads back bit-identical
FEDERATION_FLOAT_FORMAT = "%.17g"
LOCAL_PRETRAIN_RIDGE_PENALTY = 1e-3
SPLIT_GAIN_RELATIVE_TOLERANCE = 1e-10

# Experiment defaults
DEFAULT_ROUNDS = 500
DEFAULT_N_SEEDS = 5
DEFAULT_SEED = 1

DM_SWEEP = "dm_sweep"
NOISE_SWEEP = "noise_sweep"
SUBSET_SWEEP = "subset_sweep"
IFCA_COMPARE = "ifca_compare"
IFCA_MISSPECIFIED = "ifca_misspecified"
ORACLE_COMPARE = "oracle_compare"
ONLINE = "online"
TREE_AGNOSTIC = "tree_agnostic"

EXPERIMENT_KINDS = (
    DM_SWEEP,
    NOISE_SWEEP,
    SUBSET_SWEEP,
    IFCA_COMPARE,
    IFCA_MISSPECIFIED,
    ORACLE_COMPARE,
    ONLINE,
    TREE_AGNOSTIC,
)

# Which quantity each kind sweeps over, and its default values
SWEEP_PARAMETERS = {
    DM_SWEEP: "dim_ratio",
    NOISE_SWEEP: "noise_std",
    SUBSET_SWEEP: "candidate_count",
    IFCA_COMPARE: "dim_ratio",
    IFCA_MISSPECIFIED: "dim_ratio",
    ORACLE_COMPARE: "dim_ratio",
    ONLINE: "dim_ratio",
    TREE_AGNOSTIC: "dim_ratio",
}

DEFAULT_SWEEP_VALUES = {
    DM_SWEEP: [0.2, 1, 2, 5, 10],
    NOISE_SWEEP: [0.05, 0.1, 0.2, 0.5, 1],
    SUBSET_SWEEP: [5, 10, 15, 20, 30],
    IFCA_COMPARE: [0.2, 2, 5],
    IFCA_MISSPECIFIED: [0.2, 2, 5],
    ORACLE_COMPARE: [2],
    ONLINE: [0.2, 1, 2, 5, 10],
    TREE_AGNOSTIC: [0.2, 1, 2, 5, 10],
}

SWEEP_LABEL_PREFIXES = {
    "dim_ratio": "d/m",
    "noise_std": "sigma",
    "candidate_count": "S",
}
