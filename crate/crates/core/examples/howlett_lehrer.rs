//! Intertwiners between functions on G/N(P) and G/N(P⁻).

use dlchar::classfun::intertwiner_matrix;
use dlchar::groups::{build_group, opposite_parabolic, standard_parabolic, GroupSpec};

fn main() -> dlchar::Result<()> {
    let cases = [(GroupSpec::sl(2, 4)?, vec![1, 1]), (GroupSpec::gl(2, 3)?, vec![1, 1]), (GroupSpec::gl(3, 2)?, vec![1, 2])];
    for (spec, comp) in cases {
        let g = build_group(&spec)?;
        let p = standard_parabolic(&g, &comp)?;
        let opp = opposite_parabolic(&p)?;
        let there = intertwiner_matrix(&p, &opp)?;
        let back = intertwiner_matrix(&opp, &p)?;
        let round = back.matrix.mul(&there.matrix);
        println!(
            "{} {comp:?}: {}×{}, det {}, rank of the round trip {}, equivariant {}",
            g.label(),
            there.matrix.rows(),
            there.matrix.cols(),
            there.matrix.determinant()?,
            round.rank(),
            there.is_equivariant(&p.levi_embedding, p.levi.generators())
        );
    }
    Ok(())
}
