//! Standard pages, their curve catalogs and chord-diagram pairings.

use obinv::page::standard_page;

fn main() {
    for (g, r) in [(0, 2), (0, 4), (1, 2), (2, 1)] {
        let page = standard_page(g, r).unwrap();
        println!("Sigma_{{{g},{r}}}: {} bands, -chi = {}, {:?} trivialization", page.band_count(), page.neg_euler(), page.trivialization());
        println!("  J = {:?}", page.intersection_matrix().to_rows());
        println!("  V = {:?}", page.seifert_matrix().to_rows());
        for c in page.catalog() {
            let class: Vec<String> = c.homology.iter().map(|x| x.to_string()).collect();
            println!(
                "  {:<6} [{}] winding {} blackboard {}{}",
                c.name,
                class.join(","),
                c.winding,
                page.blackboard_winding(c),
                if c.h_symmetric { " hsym" } else { "" }
            );
        }
    }
}
