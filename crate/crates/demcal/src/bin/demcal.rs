fn main() {
    println!("demcal");
}
