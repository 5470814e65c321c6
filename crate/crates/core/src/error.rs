use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{requested} qubits exceeds the cap of {cap}")]
    QubitCap { requested: usize, cap: usize },
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("qubit count mismatch: expected {expected}, got {got}")]
    CountMismatch { expected: usize, got: usize },
    #[error("qubit {qubit} out of range for {n} qubits")]
    OutOfRange { qubit: usize, n: usize },
    #[error("qubit {0} listed twice")]
    DuplicateQubit(usize),
    #[error("circuit has no output register")]
    NoOutput,
    #[error("input {input} does not fit in {n_inputs} input bits")]
    InputLength { input: usize, n_inputs: usize },
    #[error("parameter {name} = {value} outside its valid range")]
    Parameter { name: &'static str, value: f64 },
    #[error("not normalized: norm squared {0}")]
    NotNormalized(f64),
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
    #[error("preparation is not clean: ancilla return probability {0}")]
    NotClean(f64),
    #[error("flag weight {measured} does not match the declared {declared}")]
    FlagWeight { measured: f64, declared: f64 },
    #[error("Fourier mass at level {level} vanishes")]
    VanishingMass { level: usize },
    #[error("compute budget exceeded: {0}")]
    Budget(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}
