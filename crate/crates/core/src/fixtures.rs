//! Transcribed matrices used as ground-truth assets.
//!
//! Each asset is embedded verbatim and checked against a SHA-256 digest on load, so a
//! stray edit to a data file fails loudly instead of silently changing golden values.

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graphs::WeightedGraph;
use crate::hadamard::HadamardMatrix;
use crate::matrix::{rational, QMatrix};

struct Asset {
    name: &'static str,
    text: &'static str,
    sha256: &'static str,
}

const HADAMARD_12: Asset = Asset {
    name: "hadamard_12.txt",
    text: include_str!("../data/hadamard_12.txt"),
    sha256: "f2e8777f40762c88e4f1a914ef06b3e53fd7ec95a08956e2c2f31225a32307f5",
};

const ORDER12_LAPLACIAN_TIMES3: Asset = Asset {
    name: "order12_laplacian_times3.txt",
    text: include_str!("../data/order12_laplacian_times3.txt"),
    sha256: "b8526bbb4433a90f09e8fa6a4a02fb4d1f87062958359f9107f8c5237d855d44",
};

const CYCLE_LAPLACIAN: Asset = Asset {
    name: "cycle_laplacian.txt",
    text: include_str!("../data/cycle_laplacian.txt"),
    sha256: "bb5244b34febb238c1c075cdac12de0c13977b76217dde9700090a2fe9b2a318",
};

const SQUARE_LAPLACIAN: Asset = Asset {
    name: "square_laplacian.txt",
    text: include_str!("../data/square_laplacian.txt"),
    sha256: "9c4a51a987c5c1ea373ae3c9046ad225e62d99cefe287ce364fab1815cd06558",
};

const FIG_MERGE_LAPLACIAN: Asset = Asset {
    name: "fig_merge_laplacian.txt",
    text: include_str!("../data/fig_merge_laplacian.txt"),
    sha256: "5cf41ac610bf386dd642183226d6f36b8a66c9db40515b36d2cffcb7fb9b53ce",
};

const COUNTEREXAMPLE_MERGE: Asset = Asset {
    name: "counterexample_merge.txt",
    text: include_str!("../data/counterexample_merge.txt"),
    sha256: "636bce702a4de8328e52d70c8fc82c49153d2716957677df3bdc05a67f1c808a",
};

const ROUTING_FIRST: Asset = Asset {
    name: "routing_first_laplacian.txt",
    text: include_str!("../data/routing_first_laplacian.txt"),
    sha256: "1dc8c37bfc6d6a179ad2c4b8d6cada9540e1799800afaf43127fa39c727749f1",
};

const ROUTING_SECOND: Asset = Asset {
    name: "routing_second_laplacian.txt",
    text: include_str!("../data/routing_second_laplacian.txt"),
    sha256: "af6d6b5202764b24e7e51e4a271c1fd0a35446209fa43c30007b3784e15388a1",
};

fn load(asset: &Asset) -> Result<&'static str> {
    let digest = Sha256::digest(asset.text.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    if hex != asset.sha256 {
        return Err(Error::Internal(format!("checksum mismatch for data asset {}", asset.name)));
    }
    Ok(asset.text)
}

fn laplacian_asset(asset: &Asset) -> Result<QMatrix> {
    load(asset)?.parse()
}

/// The order-12 normalized Hadamard matrix used by the order-12 weighted example.
pub fn hadamard_12() -> Result<HadamardMatrix> {
    load(&HADAMARD_12)?.parse()
}

/// Order-12 graph with weights in thirds, diagonalized by [`hadamard_12`], PST between
/// vertices 1 and 2 at π/2.
pub fn order12_graph() -> Result<WeightedGraph> {
    let times3 = laplacian_asset(&ORDER12_LAPLACIAN_TIMES3)?;
    WeightedGraph::from_laplacian(&times3.scale(&(rational(1) / rational(3))))
}

/// The 4-cycle 1–2–3–4–1.
pub fn cycle_graph() -> Result<WeightedGraph> {
    WeightedGraph::from_laplacian(&laplacian_asset(&CYCLE_LAPLACIAN)?)
}

/// The 4-cycle labelled as the 2-cube: 1–2, 1–3, 2–4, 3–4.
pub fn square_graph() -> Result<WeightedGraph> {
    WeightedGraph::from_laplacian(&laplacian_asset(&SQUARE_LAPLACIAN)?)
}

/// Laplacian of the unit-weight merge of [`cycle_graph`] and [`square_graph`].
pub fn cycle_square_merge_laplacian() -> Result<QMatrix> {
    laplacian_asset(&FIG_MERGE_LAPLACIAN)
}

/// Laplacian of (K₈ minus a triangle) merged with the 3-cube at weights (2, 1).
pub fn counterexample_merge_laplacian() -> Result<QMatrix> {
    laplacian_asset(&COUNTEREXAMPLE_MERGE)
}

/// The 3-cube; PST pairs (1,8), (2,7), (3,6), (4,5).
pub fn routing_first_graph() -> Result<WeightedGraph> {
    WeightedGraph::from_laplacian(&laplacian_asset(&ROUTING_FIRST)?)
}

/// A second cubic graph on 8 vertices; PST pairs (1,6), (2,5), (3,8), (4,7).
pub fn routing_second_graph() -> Result<WeightedGraph> {
    WeightedGraph::from_laplacian(&laplacian_asset(&ROUTING_SECOND)?)
}
