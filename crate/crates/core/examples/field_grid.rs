//! Write a CSV grid of E and B for one mode through the same code path as
//! `qbessel field`.

fn main() {
    let out = std::env::temp_dir().join("qbessel_field.csv");
    let code = qbessel::cli::run([
        "qbessel",
        "field",
        "--family",
        "tm",
        "--m",
        "2",
        "--kperp",
        "1.0",
        "--kz",
        "2.0",
        "--plane",
        "z=0",
        "--grid",
        "32x32",
        "--extent",
        "8",
        "--out",
        out.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&out).unwrap();
    println!(
        "exit {code}; {} data rows in {}",
        text.lines().count() - 1,
        out.display()
    );
    for line in text.lines().take(3) {
        println!("{}", &line[..line.len().min(120)]);
    }
}
