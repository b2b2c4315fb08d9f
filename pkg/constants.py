"""
The constants module is a convenience place to hold simulator-wide
numerical or boolean constants. Don't use this for any other purpose!

Quantities must have their units specified
Default units:
    Power ratios: decibels when the name ends in Db, linear otherwise
    Time: seconds

Dimension names (as used throughout the receivers):
    M: base station antennas
    N: RIS elements
    L: user terminal antennas
    T: symbol periods per sub-frame
    K: sub-frames

Matrix layout:
    G: N x L, UT -> RIS
    H: M x N, RIS -> BS
    Theta: LM x N, combined channel (column n is g_n kron h_n)
    X: L x T, symbols; column 0 is the pilot
"""

# Basic units
kMillisecondsPerSecond = 1000 / 1
"""milliseconds / second"""

# Reference link setup
kDefaultBaseStationAntennas = 8
"""M, antennas"""

kDefaultRisElements = 32
"""N, elements"""

kDefaultTerminalAntennas = 2
"""L, antennas"""

kDefaultSymbolPeriods = 4
"""T, symbol periods / sub-frame"""

kDefaultSubFrames = 64
"""K, sub-frames"""

kDefaultSnrGridDb = (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)
"""dB"""

kDefaultRuns = 200
"""Monte Carlo trials / SNR point"""

kFullScaleRuns = 10000
"""Monte Carlo trials / SNR point"""

kDefaultBaseSeed = 0

kSupportedConstellationOrders = (4, 16, 64)
"""points / constellation"""

kDefaultConstellationOrder = 64
"""points / constellation"""

kPilotValue = 1 + 0j
"""known symbol sent by every antenna in the first symbol period"""

kPilotColumn = 0

# Channels
kChannelKindSalehValenzuela = "sv"
kChannelKindRayleigh = "rayleigh"
kChannelKinds = (kChannelKindSalehValenzuela, kChannelKindRayleigh)
kDefaultChannelKind = kChannelKindSalehValenzuela

kDefaultPaths = 1
"""propagation paths / channel"""

kDefaultArraySpacing = 0.5
"""wavelengths"""

# Numerical thresholds
kDiagonalTolerance = 1e-14
"""largest off-diagonal magnitude still treated as diagonal"""

kPhaseReferenceTolerance = 1e-12
"""fraction of max |u_i| below which an entry is skipped as phase reference"""

kPilotTolerance = 1e-12
"""smallest usable pilot estimate magnitude"""

# Alternating least squares
kMaxIterations = 500
"""iterations"""

kRelativeTolerance = 1e-6
"""relative change of the reconstruction residual"""

kResidualFloor = 1e-26
"""residual / ||y||^2 below which the fit is treated as exact"""

kMaxStartAttempts = 10
"""random starts tried before a first-iteration singularity is reported"""

kStartConditionTolerance = 1e-10
"""smallest usable squared singular value of the first symbol system, relative to the largest"""

# Cost model
kKrfCostFactor = 4
"""flops / (N * M * L), rank-one SVD of an M x L matrix"""

kDefaultFlopsSweepN = (16, 32, 64, 128)
"""RIS elements"""

# Harness
kSeedMask = (1 << 63) - 1
"""trial seeds are kept within a signed 64 bit integer"""

kSeedEnvironmentVariable = "TSB_SIM_SEED"

kReceiverTsb = "tsb"
kReceiverTsbFast = "tsbfast"
kReceiverTsbRefined = "tsbref"
kReceiverTals = "tals"
kReceiverLs = "ls"
kReceiverKrf = "krf"
kReceiverBals = "bals"
"""aggregate-only row, computed from the raw estimate of the tsb trials"""

kReceiverLabels = (
    kReceiverTsb,
    kReceiverTsbFast,
    kReceiverTsbRefined,
    kReceiverTals,
    kReceiverLs,
    kReceiverKrf,
)
kDefaultReceivers = (kReceiverTsb, kReceiverTals, kReceiverLs, kReceiverKrf)

kTrialsFileName = "trials.csv"
kAggregateFileName = "aggregate.csv"
kRuntimeFileName = "runtime.csv"

kTrialsColumns = (
    "receiver",
    "snr_db",
    "trial",
    "seed",
    "nmse_raw",
    "nmse_refined",
    "ser",
    "iterations",
    "flops",
    "failed",
)
kAggregateColumns = (
    "receiver",
    "snr_db",
    "runs",
    "mean_nmse_db",
    "mean_ser",
    "mean_iters",
    "flops",
)
kRuntimeColumns = ("receiver", "snr_db", "runs", "mean_wall_time_ms")

# Logging
kLogDirectory = "logs"
kReceiverLogKeyPrefix = "receivers"
kValidationFailedExitCode = 1
