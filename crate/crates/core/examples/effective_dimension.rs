//! Effective dimension against the older definition, and the water-filling
//! allocation behind it.
//!
//!     cargo run --release --example effective_dimension

use spectral_bandits::basis::SpectralBasis;
use spectral_bandits::effdim::{dimension_report, waterfill, EffDimInput};
use spectral_bandits::graph::{generate, GraphModel};

fn main() -> spectral_bandits::Result<()> {
    // K cliques: the effective dimension is exactly K
    let g = generate(GraphModel::Blocks { k: 5, m: 20 }, 100, 0)?;
    let input = EffDimInput::from_basis(&SpectralBasis::from_graph(&g, 0.1, None)?, 100)?;
    let fill = waterfill(&input);
    let r = dimension_report(&input);
    println!(
        "blocks K=5: d={} d_old={} ratio={:.3}",
        r.d, r.d_old, r.ratio
    );
    println!(
        "  {} components filled to level {:.3}; first 6 shares {:?}",
        fill.omega,
        fill.level,
        &fill.t[..6]
    );

    println!("\n{:>10} {:>6} {:>6} {:>6}", "graph", "T", "d", "d_old");
    for (name, model) in [
        ("ER", GraphModel::ErdosRenyi { p: 0.005 }),
        ("BA", GraphModel::BarabasiAlbert { m: 2, k0: 3 }),
        ("lattice", GraphModel::Lattice),
    ] {
        let basis = SpectralBasis::from_graph(&generate(model, 500, 1)?, 0.01, None)?;
        for t in [10, 100, 1000, 10_000] {
            let r = dimension_report(&EffDimInput::from_basis(&basis, t)?);
            println!("{name:>10} {t:>6} {:>6} {:>6}", r.d, r.d_old);
        }
    }
    Ok(())
}
