pub mod error;
pub mod exprlang;
pub mod funcore;
pub mod transforms;
pub mod shear;
pub mod criteria;
pub mod verify;
pub mod cli;
