//! Instance generators and file formats.

mod io;
mod office;
mod rn;

pub use io::{
    instance_from_json, instance_to_json, load_instance, load_office_spec, save_instance, save_office_spec,
};
pub use office::{generate_office_layer, OfficeGridSpec, SPARSITY_FLOOR};
pub use rn::generate_rn_instance;
