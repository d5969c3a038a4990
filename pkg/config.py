# Paths
DATA_DIR = "data"
GOLDEN_DIR = f"{DATA_DIR}/golden"
RESULTS_DIR = "results"

# Golden files (the two-qubit U + CNOT example program)
GOLDEN_CIRCUIT_FILE = f"{GOLDEN_DIR}/u_cnot_circuit.txt"
GOLDEN_OUTCOMES_FILE = f"{GOLDEN_DIR}/u_cnot_outcomes.tsv"
GOLDEN_ROM_FILE = f"{GOLDEN_DIR}/u_cnot_rom.txt"
GOLDEN_TRACE_FILE = f"{GOLDEN_DIR}/u_cnot_trace.tsv"

# Default output files
ROM_OUTPUT = f"{RESULTS_DIR}/program_rom.txt"
THETA_OUTPUT = f"{RESULTS_DIR}/theta_table.tsv"
TRACE_OUTPUT = f"{RESULTS_DIR}/trace.tsv"
VERIFY_OUTPUT = f"{RESULTS_DIR}/cnot_verification.tsv"
TIMING_OUTPUT = f"{RESULTS_DIR}/timing_report.tsv"


# State-vector limits
MAX_AMPLITUDES = 2 ** 24
SIM_MAX_ROWS = 10          # 2N qubits live while streaming columns
VERIFIER_MAX_VERTICES = 14

# Numerical tolerances
NORM_TOL = 1e-12
ENTANGLEMENT_TOL = 1e-10
EXPECTATION_IMAG_TOL = 1e-10
EIGEN_TOL = 1e-10
FIDELITY_TOL = 1e-9
IMPOSSIBLE_BRANCH_P = 1e-12


# Random seed for reproducibility
RANDOM_SEED = 42

# Verification runs
EQUIVALENCE_SEEDS = 200
RANDOM_CIRCUITS = 50
RANDOM_CIRCUIT_MAX_ROWS = 4
RANDOM_CIRCUIT_MAX_LAYERS = 4
BRANCH_SAMPLE = 256
READOUT_SHOTS = 10_000
READOUT_SIGMA = 4.5              # worst per-outcome deviation allowed
NUM_WORKERS = 4


# Photonics
SPEED_OF_LIGHT = 299_792_458.0   # m/s
MODE_INDEX = 2.4                 # SOI waveguide
PHOTON_CLOCK_HZ = 150e6

# Clock plan (Kintex-7 design)
KINTEX7_FMAX_HZ = 190e6
PHASE_S_DEG = 220.0
PHASE_R_DEG = 300.0

# Clock plan (Kintex UltraScale+ re-implementation)
ULTRASCALE_FMAX_HZ = 220e6
ULTRASCALE_PHASE_S_DEG = 140.0
ULTRASCALE_PHASE_R_DEG = 230.0

# Logic delay measured at 150 MHz
T_LOGIC_150MHZ = 5.08e-9

# Frequency sweep (Hz)
SWEEP_START_HZ = 10e6
SWEEP_STOP_HZ = 190e6
SWEEP_STEP_HZ = 10e6

# I/O pads
COMMON_PINS = 4                  # X_p, MMCM locked, reset, enable
VIRTEX7_USER_IO = 1200
