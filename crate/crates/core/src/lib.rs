pub mod anchor;
pub mod bgg;
pub mod emod;
pub mod exactlin;
pub mod extalg;
pub mod pipeline;
pub mod sheafcoh;
