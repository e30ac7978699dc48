//! Generate each graph family, round-trip it through the text format and
//! look at the bottom of its Laplacian spectrum.
//!
//!     cargo run --release --example graphs_and_basis

use spectral_bandits::basis::SpectralBasis;
use spectral_bandits::graph::{generate, parse_graph, write_graph, GraphModel};

fn main() -> spectral_bandits::Result<()> {
    let models = [
        GraphModel::ErdosRenyi { p: 0.01 },
        GraphModel::BarabasiAlbert { m: 2, k0: 3 },
        GraphModel::Lattice,
        GraphModel::Blocks { k: 8, m: 25 },
    ];
    for model in models {
        let g = generate(model, 200, 1)?;
        let mut text = Vec::new();
        write_graph(&g, &mut text).expect("in-memory write");
        let back = parse_graph(std::str::from_utf8(&text).unwrap(), "memory")?;
        assert_eq!(back, g);

        let basis = SpectralBasis::from_graph(&g, 0.01, None)?;
        let eig = basis.eigenvalues();
        let zeros = eig.iter().filter(|&&e| e.abs() < 1e-8).count();
        println!(
            "{model:<20} nodes={} edges={} components={} zero eigenvalues={} lowest nonzero={:.4} largest={:.2} hash={}",
            g.n_nodes(),
            g.n_edges(),
            g.n_components(),
            zeros,
            eig[zeros],
            eig[eig.len() - 1],
            &g.content_hash()[..12],
        );
        println!(
            "{:<20} |QᵀQ - I| = {:.1e}, residual = {:.1e}",
            "",
            basis.orthonormality_error(),
            basis.max_relative_residual(&g.laplacian())
        );
    }
    Ok(())
}
