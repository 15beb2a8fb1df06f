use gtrunc::coloring;
use gtrunc::multigraph::Multigraph;
use gtrunc::sun::{self, ColorVector, SunColoring};

fn vectors(d: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(parts: usize, total: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=total {
            prefix.push(first);
            go(parts - 1, total - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(d, r, &mut Vec::new(), &mut out);
    out
}

fn check(s: &SunColoring, entries: &[usize], valency: usize) {
    let r = entries.iter().sum::<usize>();
    assert_eq!(s.constituent.order(), r, "{entries:?}");
    assert_eq!(s.constituent.regular_valency(), Some(valency), "{entries:?}");
    assert!(s.is_proper(), "{entries:?}");
    let (g, c): (Multigraph, _) = s.to_graph();
    assert!(coloring::is_proper(&g, &c).unwrap(), "{entries:?}");
    for (color, &want) in entries.iter().enumerate() {
        let got = s.pendant_colors.iter().filter(|&&p| p == color).count();
        assert_eq!(got, want, "{entries:?} color {color}");
    }
    assert!(c.used_colors().len() <= s.palette);
}

#[test]
fn every_admissible_vector_up_to_ten_positions() {
    let mut built = 0;
    for r in 2..=10 {
        for d in 2..=r.min(6) {
            for entries in vectors(d, r) {
                let v = ColorVector::new(entries.clone()).unwrap();
                if sun::admissible(&v).unwrap() {
                    let s = sun::build_sun(&v).unwrap();
                    check(&s, &entries, d - 1);
                    assert_eq!(s.palette, d);
                    built += 1;
                }
            }
        }
    }
    assert_eq!(built, 899);
}

#[test]
fn even_vectors_at_every_valency() {
    for r in (2..=10).step_by(2) {
        for d in 1..=5 {
            for entries in vectors(d, r) {
                let v = ColorVector::new(entries.clone()).unwrap();
                if entries.iter().any(|x| x % 2 == 1) {
                    continue;
                }
                let nonzero = entries.iter().filter(|&&x| x > 0).count();
                for k in nonzero..r {
                    let s = sun::build_sun_valency(&v, k).unwrap_or_else(|e| panic!("{v} k={k}: {e}"));
                    check(&s, &entries, k);
                }
                assert!(sun::build_sun_valency(&v, r).is_err());
            }
        }
    }
}

#[test]
fn sorted_inadmissible_vectors_are_refuted() {
    // colors are interchangeable, so sorted vectors stand for all orders
    for r in 2..=7 {
        for d in 2..=r.min(5) {
            for entries in vectors(d, r) {
                if entries.windows(2).any(|w| w[0] < w[1]) {
                    continue;
                }
                let v = ColorVector::new(entries).unwrap();
                if !sun::admissible(&v).unwrap() {
                    assert!(sun::verify_totally_inadmissible(&v).unwrap(), "{v}");
                }
            }
        }
    }
}

#[test]
fn vectors_parse_and_print() {
    let v: ColorVector = "(4, 2, 0)".parse().unwrap();
    assert_eq!(v.entries(), &[4, 2, 0]);
    assert_eq!(v.to_string(), "(4,2,0)");
    assert_eq!((v.r(), v.d()), (6, 3));
    assert!("1,x".parse::<ColorVector>().is_err());
    assert!(!sun::admissible(&"3,1".parse().unwrap()).unwrap());
    assert!(sun::admissible(&"1,1,1,1,1".parse::<ColorVector>().unwrap()).is_ok());
    assert!(sun::admissible(&"1,0,0".parse::<ColorVector>().unwrap()).is_err());
}
