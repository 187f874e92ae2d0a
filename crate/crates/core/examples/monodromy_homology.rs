//! Monodromy action, arc images and first homology of open books.

use obinv::kirby::{diagram_from_openbook, LinkingPresentation};
use obinv::manifold::{h1_via_monodromy, mmnk, monodromy_arcs_text};
use obinv::mapping::{monodromy_action, OpenBook};
use obinv::page::standard_page;

fn main() {
    let ob = OpenBook::from_names(standard_page(1, 2).unwrap(), "+a1 +b1 +gamma +c").unwrap();
    let act = monodromy_action(&ob);
    println!("word: {}", ob.word());
    println!("action on H1(page): {:?}", act.matrix.to_rows());
    println!("arc images: {:?}", monodromy_arcs_text(&ob));
    println!("H1 via monodromy: {}", h1_via_monodromy(&ob).0);
    let lp = LinkingPresentation::from_diagram(&diagram_from_openbook(&ob)).unwrap();
    println!("H1 via linking matrix: {}", lp.homology());

    for (m, n, k) in [(0, 4, 1), (0, 2, 2), (2, -3, -5)] {
        println!("mmnk({m},{n},{k}): H1 = {}", h1_via_monodromy(&mmnk(m, n, k)).0);
    }
}
