//! stub
pub struct EvolutionTrace;
pub struct SolverConfig;
