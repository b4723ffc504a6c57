pub mod presheaves;
