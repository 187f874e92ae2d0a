//! Positive stabilization keeps d3, negative stabilization raises it by one.

use obinv::mapping::{stabilize, OpenBook, Stabilization};
use obinv::page::standard_page;
use obinv::report::{invariant_report, Subject};

fn main() {
    let ob = OpenBook::from_names(standard_page(0, 2).unwrap(), "-c -c").unwrap();
    let show = |label: &str, ob: &OpenBook| {
        let r = invariant_report(&Subject::OpenBook(ob.clone())).unwrap();
        println!("{label:<10} page ({},{})  H1 {}  d3 {}", ob.page().genus(), ob.page().boundary_count(), r.h1, r.d3);
    };
    show("original", &ob);
    show("positive", &stabilize(&ob, Stabilization::Positive, (1, 2)).unwrap());
    show("negative", &stabilize(&ob, Stabilization::Negative, (1, 1)).unwrap());
    let twice = stabilize(&stabilize(&ob, Stabilization::Negative, (1, 1)).unwrap(), Stabilization::Negative, (2, 3)).unwrap();
    show("neg x2", &twice);
}
