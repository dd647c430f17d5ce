fn main() {
    let t = std::time::Instant::now();
    let all = nbspec_core::graph::enumerate_classes(9);
    let md2 = all.iter().filter(|g| g.min_degree() >= 2).count();
    println!("n=9: {} classes ({} md2) in {:.1?}", all.len(), md2, t.elapsed());
}
