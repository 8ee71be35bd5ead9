pub mod bench;
pub mod border_finder;
pub mod cli;
pub mod error;
pub mod generate;
pub mod graph;
pub mod island;
pub mod kt;
pub mod matrix;
pub mod oracle;
pub mod pipeline;
pub mod sparsify;
pub mod union_find;
