pub mod error;
pub mod linalg;
pub mod par;
pub mod prox;
pub mod model;
pub mod moreau;
pub mod npg;
pub mod problems;
pub mod sdcam;
pub mod bench;
