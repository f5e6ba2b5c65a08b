use std::io::Cursor;

use num_complex::Complex64;

use qmix::fourier::{class_function_scalar, invert_class_function};
use qmix::group::{read_group, write_group};
use qmix::{compute_character_table, conjugacy_classes, construct_group, parse_spec, GroupFunction};

#[test]
fn table_survives_file_round_trip() {
    let g = construct_group(&parse_spec("psl2:7").unwrap()).unwrap();
    let mut buf = Vec::new();
    write_group(&g, &mut buf).unwrap();
    let back = read_group(Cursor::new(buf)).unwrap();
    assert_eq!(back.order(), 168);
    for a in (0..168).step_by(7) {
        for b in 0..168 {
            assert_eq!(back.mul(a, b), g.mul(a, b));
        }
    }
    // A table read from disk yields the same character degrees.
    let degrees = |g: &qmix::GroupTable| {
        let c = conjugacy_classes(g);
        let mut d = compute_character_table(g, &c, 3, 1e-8).unwrap().degrees;
        d.sort();
        d
    };
    assert_eq!(degrees(&back), degrees(&g));
}

#[test]
fn complex_class_functions_invert_exactly() {
    // sl2:5 has non-real characters, so conjugation errors would show up.
    let g = construct_group(&parse_spec("sl2:5").unwrap()).unwrap();
    let c = conjugacy_classes(&g);
    let t = compute_character_table(&g, &c, 5, 1e-8).unwrap();
    let per_class: Vec<Complex64> = (0..c.k)
        .map(|i| Complex64::new(i as f64 * 0.5 - 1.0, (i * i) as f64 * 0.1))
        .collect();
    let f = GroupFunction::new(&g, c.class_of.iter().map(|&i| per_class[i as usize]).collect()).unwrap();
    let scalars: Vec<Complex64> = (0..t.k)
        .map(|r| class_function_scalar(&f, &t, &c, r).unwrap())
        .collect();
    let back = invert_class_function(&g, &scalars, &t, &c).unwrap();
    for x in 0..g.order() {
        assert!((back.at(x) - f.at(x)).norm() < 1e-10);
    }
}
