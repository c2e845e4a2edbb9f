fn main() {
    println!("lebnag");
}
