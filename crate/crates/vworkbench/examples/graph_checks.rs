//! Hyperbolicity bookkeeping on finite graphs: exact four-point delta,
//! projections to a line, and the projection and broken-geodesic
//! inequalities that hold with graph-adjusted constants.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vworkbench::hyplab::{
    check_broken_geodesic, check_projection_window, check_quasigeodesic_fact, grid_graph, project,
    random_connected_graph, sweep_broken_geodesic, sweep_projection_window, HypGraph, LineWitness,
    Outcome, GEODESIC_CAP,
};

fn main() {
    // Trees have delta = 0; a grid does not.
    let tree = HypGraph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (1, 4), (4, 5), (0, 6)]).unwrap();
    let grid = grid_graph(3, 4);
    println!("tree 2*delta = {}", tree.delta2());
    println!("3x4 grid 2*delta = {}", grid.delta2());

    // A witness line along the bottom row of the grid, with its measured
    // quasigeodesity constant k.
    let line = LineWitness::new(&grid, vec![0, 1, 2, 3], GEODESIC_CAP).unwrap();
    println!("line {:?}, k = {}", line.path(), line.k());

    // Project an off-line vertex and check the concatenation through the
    // projection is close to geodesic.
    let x = 11; // opposite corner
    let p = project(&grid, x, &line);
    println!("projection of {x} onto the line: {p}");
    let q = check_quasigeodesic_fact(&grid, x, p, 0, &line).unwrap();
    println!("concatenation defect {} within slack {}: {}", q.max_defect, q.slack, q.holds);

    let win = check_projection_window(&grid, x, 2, &line, GEODESIC_CAP).unwrap();
    match win {
        Outcome::Checked(res) => println!("projection window check holds: {}", res.holds),
        other => println!("projection window: {other:?}"),
    }

    // The broken-geodesic bound only applies when the projections are far
    // apart; nearby projections are reported as ineligible, not as a pass.
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let g = random_connected_graph(&mut rng, 16, 2);
    let far = g.first_geodesic(0, g.len() as u32 - 1);
    let wline = LineWitness::new(&g, far, GEODESIC_CAP).unwrap();
    match check_broken_geodesic(&g, 3, 9, &wline) {
        Outcome::Checked(res) => println!(
            "broken geodesic: detour {} vs distance {} + allowance {}: {}",
            res.detour, res.distance, res.allowance, res.holds
        ),
        other => println!("broken geodesic: {other:?}"),
    }

    // Seeded sweeps over generated instances; zero violations expected.
    for (name, rep) in [
        ("projection window", sweep_projection_window(77, 60, GEODESIC_CAP)),
        ("broken geodesic", sweep_broken_geodesic(77, 60, GEODESIC_CAP)),
    ] {
        println!(
            "{name}: {} eligible, {} ineligible, {} over budget, {} violations",
            rep.eligible, rep.skipped_ineligible, rep.skipped_budget, rep.violations
        );
    }
}
