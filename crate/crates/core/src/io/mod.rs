//! Automaton files and seeded instance generators.

mod file;
mod gen;

pub use file::{
    from_json_str, from_json_str_with, load, load_with, save, to_json_string, AutomatonFile,
    ObservableJson, SCHEMA_VERSION,
};
pub use gen::{cnot, gen_instance, haar_unitary, random_density, random_pure_state, InstanceKind};
