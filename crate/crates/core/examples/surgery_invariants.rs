//! Euler class, d3 and Gamma of a contact surgery diagram.

use obinv::kirby::{coefficient, d3, designated_spin_structures, euler_class, gamma, spin_structures, ContactSurgeryDiagram, GammaValue, LinkingPresentation, SurgeryComponent};
use num_bigint::BigInt;

fn main() {
    // a Legendrian unknot with tb = -2, rot = 1, and a push-off of an unknot with contact (-1/2) surgery
    let mut d = ContactSurgeryDiagram::new();
    let k1 = d.push(SurgeryComponent::legendrian("K1", -2, 1, coefficient(1, 1)));
    let k2 = d.push(SurgeryComponent::legendrian("K2", -1, 0, coefficient(-1, 2)));
    d.set_link(k1, k2, BigInt::from(1));

    let lp = LinkingPresentation::from_diagram(&d).unwrap();
    println!("components after expansion: {:?}", lp.labels);
    println!("linking matrix: {:?}", lp.matrix.to_rows());
    println!("H1 = {}", lp.homology());
    let e = euler_class(&lp);
    println!("e = {} ({})", e.element, if e.torsion { "torsion" } else { "non-torsion" });
    println!("d3 = {}", d3(&lp).unwrap());
    let designated = designated_spin_structures(&lp, 0);
    let all = spin_structures(&lp);
    for s in all.iter() {
        // a lone spin structure is designated regardless of the probe
        let mark = if all.len() == 1 || designated.contains(s) { " [designated]" } else { "" };
        match gamma(&lp, s).unwrap() {
            GammaValue::Conclusive(g) => println!("Gamma[{s}] = {g}{mark}"),
            GammaValue::Inconclusive { odd_components } => println!("Gamma[{s}] inconclusive at {odd_components:?}{mark}"),
        }
    }
}
