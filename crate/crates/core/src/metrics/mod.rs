pub mod ber;
pub mod complexity;
pub mod efficiency;
pub mod experiment;
pub mod interference;
pub mod psd;
