pub mod filtration;
pub mod group;
pub mod herbrand;
pub mod merge;
pub mod plan;
