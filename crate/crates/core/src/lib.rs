pub mod compile;
pub mod corpus;
pub mod dot;
pub mod gen;
pub mod lang;
pub mod mixed;
pub mod models;
pub mod opsem;
pub mod relalg;
pub mod runner;
pub mod sim;
pub mod suite;
pub mod transform;
