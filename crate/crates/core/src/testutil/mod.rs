pub mod reference_aes;
