pub mod alphabet;
pub mod cli;
pub mod count;
pub mod expr;
pub mod modular;
pub mod sing;
