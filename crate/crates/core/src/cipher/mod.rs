//! Permutation-diffusion image cipher.

mod image;
mod isa;
mod pipeline;
mod tda;

pub use image::ImageCube;
pub use isa::{isa_forward, isa_inverse, permute, unpermute};
pub use pipeline::{
    decrypt, decrypt_batch, decrypt_with_schedule, encrypt, encrypt_batch, encrypt_with_schedule,
    is_stackable, CipherConfig,
};
pub use tda::{
    sweep, tda_backward, tda_forward, tda_gray, tda_gray_inverse, tda_inverse_backward,
    tda_inverse_forward, unsweep, Direction,
};
