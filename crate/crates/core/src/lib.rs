pub mod algebra;
pub mod page;
pub mod mapping;
pub mod manifold;
pub mod kirby;
pub mod report;
pub mod format;
pub mod cli;
