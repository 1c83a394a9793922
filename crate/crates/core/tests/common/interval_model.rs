//! Naive sorted-list reference for `MonotonicFamily`, and a randomized
//! driver comparing the two.

use ivd_core::interval::{canonical_union, Coord, Endpoint, EndpointPolicy, Interval, MonotonicFamily, StoreError};
use ivd_core::Weight;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, Default)]
pub struct Model {
    pub items: Vec<Interval>,
}

fn left_cmp(a: &Interval, b: &Interval) -> std::cmp::Ordering {
    // Sort by left endpoint, closed before open at equal values.
    a.left.value.cmp(&b.left.value).then_with(|| b.left.closed.cmp(&a.left.closed))
}

impl Model {
    pub fn insert(&mut self, i: Interval) -> Result<(), StoreError> {
        if self.items.iter().any(|x| x.contains(&i) || i.contains(x)) {
            return Err(StoreError::Nested);
        }
        self.items.push(i);
        self.items.sort_by(left_cmp);
        Ok(())
    }

    pub fn delete(&mut self, i: &Interval) -> Result<(), StoreError> {
        let pos = self.items.iter().position(|x| x == i).ok_or(StoreError::Absent)?;
        self.items.remove(pos);
        Ok(())
    }

    pub fn hit_by(&self, j: &Interval) -> bool {
        self.items.iter().any(|x| x.intersects(j))
    }

    pub fn containing(&self, y: &Weight) -> (Model, Model) {
        let (h, r): (Vec<_>, Vec<_>) = self.items.iter().cloned().partition(|x| x.contains_point(y));
        (Model { items: h }, Model { items: r })
    }

    pub fn clip_union(&self, j: &Interval) -> (Vec<Interval>, Vec<Interval>) {
        let fin: Vec<_> = self.items.iter().filter_map(|x| x.intersection(j)).collect();
        let lo = Interval::new(
            Endpoint { value: Coord::neg_inf(), closed: false },
            Endpoint { value: j.left.value.clone(), closed: true },
        )
        .unwrap();
        let hi = Interval::new(
            Endpoint { value: j.right.value.clone(), closed: true },
            Endpoint { value: Coord::pos_inf(), closed: false },
        )
        .ok();
        let fout: Vec<_> = self
            .items
            .iter()
            .flat_map(|x| [x.intersection(&lo), hi.as_ref().and_then(|h| x.intersection(h))])
            .flatten()
            .collect();
        (canonical_union(&fin), canonical_union(&fout))
    }

    pub fn shift(&self, a: &Weight) -> Model {
        let items = self
            .items
            .iter()
            .map(|x| {
                let mv = |e: &Endpoint| Endpoint { value: add(&e.value, a), closed: e.closed };
                Interval::new(mv(&x.left), mv(&x.right)).unwrap()
            })
            .collect();
        Model { items }
    }

    pub fn extend(&self, l: &Weight, policy: EndpointPolicy) -> Model {
        let neg = -l.clone();
        let items = self
            .items
            .iter()
            .map(|x| {
                let (lc, rc) = match policy {
                    EndpointPolicy::Keep => (x.left.closed, x.right.closed),
                    EndpointPolicy::Open => (false, false),
                    EndpointPolicy::Closed => (true, true),
                };
                Interval::new(
                    Endpoint { value: add(&x.left.value, &neg), closed: lc },
                    Endpoint { value: add(&x.right.value, l), closed: rc },
                )
                .unwrap()
            })
            .collect();
        Model { items }
    }

    fn distinct_values(&self) -> bool {
        self.items.windows(2).all(|w| w[0].left.value != w[1].left.value && w[0].right.value != w[1].right.value)
    }
}

fn add(c: &Coord, w: &Weight) -> Coord {
    match c.to_finite() {
        Some(f) => Coord::finite(&f + w),
        None => c.clone(),
    }
}

fn rand_weight(rng: &mut ChaCha8Rng) -> Weight {
    let a = rng.random_range(-20i64..=20);
    let b = if rng.random_bool(0.2) { rng.random_range(-1i64..=1) } else { 0 };
    Weight::new(a.into(), b.into(), 0.into())
}

fn rand_interval(rng: &mut ChaCha8Rng) -> Interval {
    loop {
        let x = rand_weight(rng);
        let y = if rng.random_bool(0.15) { x.clone() } else { &x + &Weight::int(rng.random_range(0i64..8)) };
        let lc = rng.random_bool(0.6);
        let rc = rng.random_bool(0.6);
        let right = if rng.random_bool(0.03) {
            Endpoint { value: Coord::pos_inf(), closed: false }
        } else {
            Endpoint { value: y.into(), closed: rc }
        };
        if let Ok(i) = Interval::new(Endpoint { value: x.into(), closed: lc }, right) {
            return i;
        }
    }
}

fn same(store: &MonotonicFamily, model: &Model, what: &str) -> Result<(), String> {
    store.check_invariants().map_err(|e| format!("{what}: {e}"))?;
    if store.report() != model.items {
        return Err(format!("{what}: store {:?} vs model {:?}", store.report(), model.items));
    }
    Ok(())
}

pub struct ModelRun {
    pub ops: usize,
    pub versions_checked: usize,
}

/// Runs `ops` random operations on a store and the model in lockstep.
pub fn run(ops: usize, seed: u64) -> Result<ModelRun, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut store = MonotonicFamily::new();
    let mut model = Model::default();
    let mut versions: Vec<(MonotonicFamily, Model)> = Vec::new();
    for step in 0..ops {
        let roll = rng.random_range(0..100);
        match roll {
            0..=34 => {
                let i = rand_interval(&mut rng);
                match (store.insert(i.clone()), model.insert(i.clone())) {
                    (Ok(s), Ok(())) => store = s,
                    (Err(a), Err(b)) if a == b => {}
                    (a, b) => return Err(format!("step {step}: insert {i:?}: {:?} vs {b:?}", a.map(|_| ()))),
                }
            }
            35..=44 => {
                let i = if !model.items.is_empty() && rng.random_bool(0.8) {
                    model.items[rng.random_range(0..model.items.len())].clone()
                } else {
                    rand_interval(&mut rng)
                };
                match (store.delete(&i), model.delete(&i)) {
                    (Ok(s), Ok(())) => store = s,
                    (Err(a), Err(b)) if a == b => {}
                    (a, b) => return Err(format!("step {step}: delete {i:?}: {:?} vs {b:?}", a.map(|_| ()))),
                }
            }
            45..=59 => {
                let j = rand_interval(&mut rng);
                if store.hit_by(&j) != model.hit_by(&j) {
                    return Err(format!("step {step}: hit_by {j:?} on {:?}", model.items));
                }
                let fh = store.first_hit(&j);
                if let Some(h) = &fh {
                    if !h.intersects(&j) || !model.items.contains(h) {
                        return Err(format!("step {step}: first_hit returned {h:?}"));
                    }
                }
            }
            60..=67 => {
                let y = rand_weight(&mut rng);
                let (h, r) = store.containing(&y);
                let (mh, mr) = model.containing(&y);
                same(&h, &mh, "containing/hit")?;
                same(&r, &mr, "containing/rest")?;
                if rng.random_bool(0.3) {
                    store = r;
                    model = mr;
                }
            }
            68..=79 => {
                let j = rand_interval(&mut rng);
                let (fin, fout) = store.clip(&j);
                fin.check_invariants().map_err(|e| format!("step {step}: clip in: {e}"))?;
                fout.check_invariants().map_err(|e| format!("step {step}: clip out: {e}"))?;
                let (ui, uo) = model.clip_union(&j);
                if canonical_union(&fin.report()) != ui {
                    return Err(format!(
                        "step {step}: clip {j:?} of {:?}: in {:?} want {ui:?}",
                        model.items,
                        fin.report()
                    ));
                }
                if canonical_union(&store.clip_inside(&j).report()) != ui {
                    return Err(format!("step {step}: clip_inside {j:?}"));
                }
                let pieces =
                    canonical_union(&(0..rng.random_range(1..4)).map(|_| rand_interval(&mut rng)).collect::<Vec<_>>());
                let multi = store.clip_to_union(&pieces);
                multi.check_invariants().map_err(|e| format!("step {step}: clip_to_union: {e}"))?;
                let want: Vec<Interval> =
                    model.items.iter().flat_map(|x| pieces.iter().filter_map(|p| x.intersection(p))).collect();
                if canonical_union(&multi.report()) != canonical_union(&want) {
                    return Err(format!("step {step}: clip_to_union {pieces:?} of {:?}", model.items));
                }
                if canonical_union(&fout.report()) != uo {
                    return Err(format!(
                        "step {step}: clip {j:?} of {:?}: out {:?} want {uo:?}",
                        model.items,
                        fout.report()
                    ));
                }
                match rng.random_range(0..3) {
                    0 => {
                        model = Model { items: fin.report() };
                        store = fin;
                    }
                    1 => {
                        model = Model { items: fout.report() };
                        store = fout;
                    }
                    _ => {}
                }
            }
            80..=87 => {
                let a = rand_weight(&mut rng);
                store = store.shift(&a);
                model = model.shift(&a);
                same(&store, &model, "shift")?;
            }
            88..=93 => {
                let l = Weight::int(rng.random_range(1i64..4));
                let policy = if model.distinct_values() {
                    [EndpointPolicy::Keep, EndpointPolicy::Open, EndpointPolicy::Closed][rng.random_range(0..3)]
                } else {
                    EndpointPolicy::Keep
                };
                store = store.extend(&l, policy);
                model = model.extend(&l, policy);
                same(&store, &model, "extend")?;
            }
            _ => {
                // Join with a far-right copy, or try a bad join.
                if model.items.iter().all(|x| x.right.value.is_finite()) && !model.items.is_empty() {
                    let lo = model.items[0].left.value.to_finite().unwrap();
                    let hi = model.items.last().unwrap().right.value.to_finite().unwrap();
                    let span = &(&hi - &lo) + &Weight::int(1);
                    // A fresh build: a shifted copy of the same tree would repeat priorities.
                    let mo = model.shift(&span);
                    let other = MonotonicFamily::from_sorted(&mo.items).unwrap();
                    if rng.random_bool(0.2) {
                        if other.join(&store).is_ok() {
                            return Err(format!("step {step}: reversed join accepted"));
                        }
                    } else {
                        store = store.join(&other).map_err(|e| format!("step {step}: join {e}"))?;
                        model.items.extend(mo.items);
                    }
                }
            }
        }
        if model.items.len() > 120 {
            let keep = model.items.len() / 2;
            let cut = model.items[keep].clone();
            let y = cut.left.value.to_finite().unwrap_or_default();
            let (_, r) = store.containing(&y);
            let (_, mr) = model.containing(&y);
            store = r;
            model = mr;
        }
        if step % 64 == 0 {
            same(&store, &model, &format!("step {step}"))?;
        }
        if step % (ops / 150).max(1) == 0 {
            versions.push((store.copy(), model.clone()));
        }
    }
    same(&store, &model, "final")?;
    for (i, (s, m)) in versions.iter().enumerate() {
        same(s, m, &format!("version {i}"))?;
    }
    Ok(ModelRun { ops, versions_checked: versions.len() })
}
