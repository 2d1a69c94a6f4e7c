// End-to-end acceptance criteria, one PASS/FAIL line each. Runs without the
// libtest harness so the lines are always printed.

use std::process::ExitCode;

use qsemi::dp::{classical_pfaffian, dp_full_sum, dp_property_suite, full_sum_distributed, DEFAULT_CAP};
use qsemi::generator::{generate_all, group_sum, maximal_placements};
use qsemi::reduction::ArrowKind;
use qsemi::verify::{bilinear_example_suite, bilinear_quiver, check_cyclic_trace};
use qsemi::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRIME: u64 = 2_147_483_647;
const ONE_OF_EACH: &str = include_str!("../../../quivers/one_of_each.json");
const TWO_LOOPS: &str = include_str!("../../../quivers/two_loops.json");

type Outcome = Result<String, String>;

fn prime() -> Field {
    Field::from_characteristic(PRIME).unwrap()
}

fn random_matrix(field: Field, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix<Scalar> {
    Matrix::from_fn(rows, cols, |_, _| field.from_i64(rng.gen_range(-6..=6)))
}

fn shapes(bound: usize) -> Vec<DpShape> {
    let mut out = Vec::new();
    for t in 0..=bound {
        for r in 0..=(bound - t) / 2 {
            for s in 0..=(bound - t) / 2 {
                let shape = DpShape::new(t, r, s);
                if !shape.is_trivial() {
                    out.push(shape);
                }
            }
        }
    }
    out
}

fn dp_identities() -> Outcome {
    let mut checks = 0;
    for field in [Field::Rational, prime()] {
        for (k, shape) in shapes(6).into_iter().enumerate() {
            let report = dp_property_suite(shape, field, 25, 1000 + k as u64).map_err(|e| e.to_string())?;
            if let Some(f) = report.failures.first() {
                return Err(format!("{shape:?} over {field}: identity {} trial {}: {} != {}", f.identity, f.trial, f.lhs, f.rhs));
            }
            checks += report.checks;
        }
    }
    Ok(format!("{checks} identity instances, t+2r, t+2s ≤ 6, both fields"))
}

fn pfaffian_relation() -> Outcome {
    let q = Field::Rational;
    let one = q.one();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for r in 1..=3usize {
        let sign = if (r * (r - 1) / 2) % 2 == 0 { 1 } else { -1 };
        let fact: i64 = (1..=r as i64).product();
        for trial in 0..50 {
            let y = random_matrix(q, 2 * r, 2 * r, &mut rng);
            let lhs = classical_pfaffian(&y.sub(&y.transpose()), &one).map_err(|e| e.to_string())?;
            let rhs = &q.from_i64(sign * fact) * &generalized_pfaffian(&y, &one).map_err(|e| e.to_string())?;
            if lhs != rhs {
                return Err(format!("2r={} trial {trial}: {lhs} != {rhs}", 2 * r));
            }
        }
    }
    Ok("pf(Y − Yᵀ) = (−1)^(r(r−1)/2) r! P(Y), 50 matrices each for 2r = 2, 4, 6".into())
}

// one part, all-ones, and (n−1, 1) when that differs from both
fn sample_partitions(n: usize) -> Vec<Multipartition> {
    if n == 0 {
        return vec![Multipartition::coarsest(&[])];
    }
    let mut out = vec![Multipartition::coarsest(&[n])];
    if n > 1 {
        out.push(Multipartition::finest(&[n]));
    }
    if n > 2 {
        out.push(Multipartition::new(vec![vec![n - 1, 1]]).unwrap());
    }
    out
}

fn coset_sums() -> Outcome {
    let q = Field::Rational;
    let one = q.one();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut cases = 0;
    for shape in shapes(5) {
        let (n, m) = (shape.rows(), shape.cols());
        let x = random_matrix(q, n, m, &mut rng);
        let y = random_matrix(q, n, n, &mut rng);
        let z = random_matrix(q, m, m, &mut rng);
        let fast = dp_eval(&x, &y, &z, shape, &one).map_err(|e| e.to_string())?;
        let full = dp_full_sum(&x, &y, &z, shape).map_err(|e| e.to_string())?;
        if fast != full {
            return Err(format!("{shape:?}: coset sum {fast}, full sum {full}"));
        }
        cases += 1;
        for gamma in sample_partitions(shape.t) {
            for delta in sample_partitions(shape.r) {
                for lambda in sample_partitions(shape.s) {
                    let xs: Vec<_> = gamma.flattened().iter().map(|_| random_matrix(q, n, m, &mut rng)).collect();
                    let ys: Vec<_> = delta.flattened().iter().map(|_| random_matrix(q, n, n, &mut rng)).collect();
                    let zs: Vec<_> = lambda.flattened().iter().map(|_| random_matrix(q, m, m, &mut rng)).collect();
                    let fast = dp_multilinear(&xs, &ys, &zs, &gamma, &delta, &lambda, &one).map_err(|e| e.to_string())?;
                    let full = full_sum_distributed(
                        &xs,
                        &ys,
                        &zs,
                        &Distribution::determined(&gamma.flattened()),
                        &Distribution::determined(&delta.flattened()),
                        &Distribution::determined(&lambda.flattened()),
                    )
                    .map_err(|e| e.to_string())?;
                    if fast != full {
                        return Err(format!("{shape:?} parts {gamma:?} {delta:?} {lambda:?}: {fast} != {full}"));
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} coset sums agree with full double sums, t+2r, t+2s ≤ 5"))
}

// (quiver, multidegree) pairs shared by the spanning, coset and weight criteria
fn spanning_cases() -> Vec<(ZigzagQuiver, MultiDegree)> {
    let mut out = Vec::new();
    for s in 1..=3 {
        out.push((bilinear_quiver(1), MultiDegree::new(vec![], vec![], vec![s])));
    }
    out.push((bilinear_quiver(2), MultiDegree::new(vec![], vec![], vec![1, 1])));
    let each = classify_zigzag(&MixedQuiver::from_json(ONE_OF_EACH).unwrap()).unwrap();
    for d in MultiDegree::all_within(each.arrow_counts(), 4, 4) {
        if !d.is_zero() {
            out.push((each.clone(), d));
        }
    }
    out
}

fn spanning() -> Outcome {
    let mut admissible = 0;
    let cases = spanning_cases();
    for (k, (zz, d)) in cases.iter().enumerate() {
        let report = spanning_check(zz, d, Field::Rational, DEFAULT_CAP, None, 40 + k as u64).map_err(|e| e.to_string())?;
        if report.verdict != Verdict::Full || !report.contained {
            return Err(format!("degree {d}: {} (rank {} of {})", report.verdict, report.rank, report.dimension));
        }
        if report.admissible {
            admissible += 1;
        } else if report.dimension != 0 {
            return Err(format!("degree {d} is not admissible but the invariant space has dimension {}", report.dimension));
        }
    }
    Ok(format!("{} multidegrees, {admissible} admissible, all spanned", cases.len()))
}

fn bilinear_example() -> Outcome {
    let q = Field::Rational;
    let zz = bilinear_quiver(1);
    let z = |i, j| Poly::var(q, VarId::z(1, i, j));
    let d = MultiDegree::new(vec![], vec![], vec![1]);
    let quint = Quintuple::new(&zz, d, vec![], vec![vec![1, 2]]).map_err(|e| e.to_string())?;
    let g = build_generator(&zz, &quint, q, DEFAULT_CAP).map_err(|e| e.to_string())?;
    let antisym = z(1, 2).sub(&z(2, 1));
    if g != antisym && g != antisym.neg() {
        return Err(format!("s=1 generator is {g}"));
    }
    let suite = bilinear_example_suite(2, 3).map_err(|e| e.to_string())?;
    if let Some(c) = suite.checks.iter().find(|c| !c.passed) {
        return Err(format!("{}: {}", c.name, c.detail));
    }
    for s in 1..=4 {
        if let Some(failure) = check_cyclic_trace(s, s).map_err(|e| e.to_string())? {
            return Err(format!("cyclic trace s={s}: {failure}"));
        }
    }
    Ok(format!("{} bilinear checks, cyclic trace for s ≤ 4", suite.checks.len()))
}

fn reduction_images() -> Outcome {
    let source = MixedQuiver::from_json(TWO_LOOPS).map_err(|e| e.to_string())?;
    let map = reduce(&source).map_err(|e| e.to_string())?;
    let mut kinds: Vec<u8> = map.arrows().iter().map(|a| a.kind.number()).collect();
    kinds.sort();
    if kinds != [1, 1, 1, 2, 3] {
        return Err(format!("arrow kinds {kinds:?}"));
    }
    if map.arrows().iter().filter(|a| a.kind == ArrowKind::Reversed).count() != 1 {
        return Err("expected exactly one reversed arrow".into());
    }
    let zz = map.target();
    if zz.arrow_counts() != [3, 1, 1] || zz.orbit_dims() != [2, 2] {
        return Err(format!("target has arrows {:?} and orbit dims {:?}", zz.arrow_counts(), zz.orbit_dims()));
    }
    let coords = map.source_coordinates();
    let (mut images, mut nonzero) = (0, 0);
    for field in [Field::Rational, prime()] {
        for (k, d) in MultiDegree::all_within(zz.arrow_counts(), 6, 6).into_iter().enumerate() {
            if d.is_zero() || d.total() > 3 {
                continue;
            }
            let (_, entries) = generate_all(zz, &d, field, DEFAULT_CAP, None).map_err(|e| e.to_string())?;
            for entry in entries {
                let image = map.phi_substitute(&entry.poly).map_err(|e| e.to_string())?;
                let outcome = check_invariance(&image, &coords, 20, 600 + k as u64, field).map_err(|e| e.to_string())?;
                if let Some(c) = outcome.counterexample {
                    return Err(format!("image of a degree {d} generator over {field}: {c}"));
                }
                images += 1;
                if !image.is_zero() {
                    nonzero += 1;
                }
            }
        }
    }
    Ok(format!("kinds 1/1/1/2/3; {images} generator images ({nonzero} nonzero) invariant, 20 samples each"))
}

fn coset_form() -> Outcome {
    let q = Field::Rational;
    let mut compared = 0;
    for (zz, d) in spanning_cases() {
        let en = enumerate_quintuples(&zz, &d, None).map_err(|e| e.to_string())?;
        for quint in &en.quintuples {
            let fast = build_generator(&zz, quint, q, DEFAULT_CAP).map_err(|e| e.to_string())?;
            let pl = maximal_placements(quint).map_err(|e| e.to_string())?;
            let full = group_sum(quint, &pl, DEFAULT_CAP).map_err(|e| e.to_string())?;
            if fast != full {
                return Err(format!("degree {d}, {quint:?}: coset form {fast}, group sum {full}"));
            }
            compared += 1;
        }
    }
    Ok(format!("{compared} generators match the normalized group sum"))
}

fn weights() -> Outcome {
    let mut checked = 0;
    for field in [Field::Rational, prime()] {
        for (k, (zz, d)) in spanning_cases().into_iter().enumerate() {
            let coords = zz.coordinates();
            let en = enumerate_quintuples(&zz, &d, None).map_err(|e| e.to_string())?;
            for quint in &en.quintuples {
                let f = build_generator(&zz, quint, field, DEFAULT_CAP).map_err(|e| e.to_string())?;
                let w = relative_weight(quint);
                let outcome = check_weight(&f, &coords, &w, 10, 900 + k as u64, field).map_err(|e| e.to_string())?;
                if let Some(c) = outcome.counterexample {
                    return Err(format!("degree {d} over {field}, weight {w:?}: {c}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} generators carry their weight, 10 samples each"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("DP symmetry and equivariance identities", dp_identities),
        ("pfaffian of the antisymmetrization", pfaffian_relation),
        ("coset sums equal full double sums", coset_sums),
        ("generators span the invariant spaces", spanning),
        ("bilinear form example", bilinear_example),
        ("reduction to a zigzag quiver", reduction_images),
        ("coset form equals group sum", coset_form),
        ("generator weights", weights),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", k + 1),
            Err(detail) => {
                println!("criterion {}: FAIL  {name}: {detail}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
