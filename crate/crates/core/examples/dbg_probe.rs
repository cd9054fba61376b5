use whittaker_core::arch::*;
use whittaker_core::scalar::c;

fn main() {
    let params = MiyazakiParams::new(2, c(0.1, 0.05)).unwrap();
    let mut fails = 0;
    for i in 0..=132 {
        for j in 0..=132 {
            let (u1, u2) = (-16.0 + i as f64 * 0.14, -16.0 + j as f64 * 0.14);
            if let Err(e) = miyazaki_direct(&params, u1.exp(), u2.exp()) {
                if fails < 6 {
                    println!("FAIL at u=({u1:.2},{u2:.2}): {e}");
                }
                fails += 1;
            }
        }
    }
    println!("total fails: {fails} / {}", 133 * 133);
}
