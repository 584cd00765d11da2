use rand::seq::index::sample;
use rand::Rng;

use crate::affectance::{encode_radio_network, Instance};
use crate::error::{Error, Result};
use crate::rng;

/// Random Radio Network layer: receiver `w` draws a degree uniformly from
/// `1..=max_degree`, then a uniform neighborhood of that size.
pub fn generate_rn_instance(n: usize, max_degree: usize, seed: u64) -> Result<Instance> {
    if n == 0 || max_degree == 0 || max_degree > n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= max_degree <= n, got max_degree = {max_degree}, n = {n}"
        )));
    }
    let mut stream = rng::substream(seed, 0);
    let neighborhoods: Vec<Vec<usize>> = (0..n)
        .map(|_| {
            let degree = stream.gen_range(1..=max_degree);
            let mut f = sample(&mut stream, n, degree).into_vec();
            f.sort_unstable();
            f
        })
        .collect();
    encode_radio_network(n, &neighborhoods)
}
