pub mod codegen;
pub mod dialogue;
pub mod lexicon;
pub mod metamodel;
pub mod model_store;
pub mod nlu;
pub mod sanitizer;
pub mod service;
pub mod validator;
