//! Conjugacy classes of SL_2(F_3) and GL_3(F_2), with regular semisimple
//! classes marked.

use dlchar::groups::{build_group, GroupSpec};

fn main() -> dlchar::Result<()> {
    for spec in [GroupSpec::sl(2, 3)?, GroupSpec::gl(3, 2)?] {
        let g = build_group(&spec)?;
        println!("{}: order {}, {} classes", g.label(), g.order(), g.num_classes());
        for (i, c) in g.classes().iter().enumerate() {
            println!(
                "  {i:>2}  size {:>3}  order {:>2}  centralizer {:>3}{}  rep {:?}",
                c.size(),
                c.order,
                c.centralizer_order,
                if c.is_rss { "  rss" } else { "" },
                c.representative.rows()
            );
        }
    }
    Ok(())
}
