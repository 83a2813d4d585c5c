//! Odd-degree caterpillars built by repeated pendant induction.
//!
//! Small diameters start from a labeled base caterpillar whose padded
//! center path contains the target's center path. Every doubling step only
//! anchors pendants on that padded path, so the span of its labels never
//! grows. Large caterpillars strip half their pendants, recurse, and put
//! them back with at most `k` distinct anchor labels.

use crate::gf2::rank_of;
use crate::trees::{
    build_caterpillar, caterpillar_numbering, pad_spec, CaterpillarSpec, LabeledTree,
};

use super::{add_pendants, ConstructError, Fixtures, PendantPlan};

pub const MAX_SMALL_DIAMETER: usize = 18;

/// Result of the small-diameter pipeline with its span measurements.
#[derive(Debug, Clone)]
pub struct SmallDiameterRun {
    pub labeled: LabeledTree,
    pub base: CaterpillarSpec,
    /// Span dimension of the padded center path labels after each step,
    /// starting with the base.
    pub spans: Vec<usize>,
}

impl SmallDiameterRun {
    pub fn bound(&self) -> usize {
        self.spans[0]
    }
}

fn spec(s: &str) -> CaterpillarSpec {
    s.parse().expect("built-in spec")
}

/// Base caterpillars whose padded center path can host a target of the
/// given diameter.
pub fn small_diameter_base(diameter: usize) -> Vec<CaterpillarSpec> {
    let names: &[&str] = match diameter {
        0..=2 => &["T[1]"],
        3 | 4 => &["T[3]"],
        5 | 6 => &["T[3,3,3]"],
        7 => &["T[5,3,3,3,3,3]", "T[3,5,3,3,3,3]", "T[3,3,5,3,3,3]"],
        8..=10 => &["T[3x7]"],
        11..=13 => &["T[3,3,3,2x6,3]"],
        14 => &["T[3,2x12]"],
        15..=17 => &["T[2x14]"],
        18 => &["T[3x15]"],
        _ => &[],
    };
    names.iter().map(|s| spec(s)).collect()
}

fn check_odd_power(spec: &CaterpillarSpec) -> Result<usize, ConstructError> {
    if !spec.all_odd() {
        return Err(ConstructError::NotOddDegree);
    }
    let count = spec.vertex_count();
    if !count.is_power_of_two() {
        return Err(ConstructError::NotPowerOfTwo(count));
    }
    Ok(count)
}

/// Labels an odd-degree caterpillar of diameter at most 18 from the bundled
/// base cases.
pub fn label_small_diameter(spec: &CaterpillarSpec) -> Result<LabeledTree, ConstructError> {
    label_small_diameter_with(spec, &Fixtures::bundled()).map(|run| run.labeled)
}

pub fn label_small_diameter_with(
    target: &CaterpillarSpec,
    fixtures: &Fixtures,
) -> Result<SmallDiameterRun, ConstructError> {
    check_odd_power(target)?;
    if target.diameter() > MAX_SMALL_DIAMETER {
        return Err(ConstructError::OutOfRange(target.diameter()));
    }
    run_from_bases(target, fixtures)
}

/// Labeled base: stored fixtures load directly, the others are derived
/// from their own band's base.
fn labeled_base(
    base: &CaterpillarSpec,
    fixtures: &Fixtures,
) -> Result<LabeledTree, ConstructError> {
    let name = base.to_string();
    if Fixtures::BASE_SPECS.contains(&name.as_str()) {
        fixtures.base(base)
    } else {
        run_from_bases(base, fixtures).map(|run| run.labeled)
    }
}

fn run_from_bases(
    target: &CaterpillarSpec,
    fixtures: &Fixtures,
) -> Result<SmallDiameterRun, ConstructError> {
    let name = target.to_string();
    if Fixtures::BASE_SPECS.contains(&name.as_str()) {
        let labeled = fixtures.base(target)?;
        let spans = vec![path_span(&labeled, &padded_path_ids(target))];
        return Ok(SmallDiameterRun {
            labeled,
            base: target.clone(),
            spans,
        });
    }
    for base in small_diameter_base(target.diameter()) {
        for reversed in [false, true] {
            let oriented = if reversed {
                target.reversed()
            } else {
                target.clone()
            };
            let Some((offset, levels)) = schedule(&pad_spec(&base), &oriented) else {
                continue;
            };
            let labeled = labeled_base(&base, fixtures)?;
            return grow(target, &base, labeled, offset, &levels, reversed);
        }
    }
    Err(ConstructError::NoAlignment(name))
}

/// Vertex ids of the padded center path of `build_caterpillar(spec)`.
fn padded_path_ids(spec: &CaterpillarSpec) -> Vec<usize> {
    let k = spec.k();
    if spec.degrees() == [1] {
        return vec![0, 1];
    }
    let first = k;
    let last = spec.vertex_count() - 1;
    let mut ids = vec![first];
    ids.extend(0..k);
    ids.push(last);
    ids
}

fn path_span(lt: &LabeledTree, ids: &[usize]) -> usize {
    let labels: Vec<_> = ids.iter().map(|&v| lt.label(v)).collect();
    rank_of(&labels)
}

/// Degrees of the padded positions after each doubling, from the base
/// (level 0) up to the target, plus the window offset of the target path.
fn schedule(base: &[usize], target: &CaterpillarSpec) -> Option<(usize, Vec<Vec<usize>>)> {
    let len = base.len();
    let k = target.k();
    if k > len {
        return None;
    }
    let base_count: usize = base.iter().sum::<usize>() + 2 - len;
    let target_count = target.vertex_count();
    if target_count < base_count || !(target_count / base_count).is_power_of_two() {
        return None;
    }
    let steps = (target_count / base_count).trailing_zeros() as usize;
    'offsets: for offset in 0..=len - k {
        let mut top = vec![1; len];
        top[offset..offset + k].copy_from_slice(target.degrees());
        if base.iter().zip(&top).any(|(&b, &t)| t < b) {
            continue;
        }
        if steps == 0 {
            if top == base {
                return Some((offset, vec![top]));
            }
            continue;
        }
        // intermediate trees must be all-odd, so nothing drops below the
        // odd ceiling of the base degree
        let floor: Vec<usize> = base.iter().map(|&b| b | 1).collect();
        let mut levels = vec![top.clone()];
        let mut cur = top;
        let mut count = target_count;
        for _ in 1..steps {
            let mut remove = count / 2;
            while remove > 0 {
                let pick = (0..len)
                    .filter(|&p| cur[p] >= floor[p] + 2)
                    .max_by_key(|&p| (cur[p], std::cmp::Reverse(p)));
                let Some(p) = pick else {
                    continue 'offsets;
                };
                cur[p] -= 2;
                remove -= 2;
            }
            count /= 2;
            levels.push(cur.clone());
        }
        if cur.iter().zip(&floor).any(|(&c, &f)| c < f) {
            continue;
        }
        levels.push(base.to_vec());
        levels.reverse();
        return Some((offset, levels));
    }
    None
}

fn grow(
    target: &CaterpillarSpec,
    base: &CaterpillarSpec,
    mut lt: LabeledTree,
    offset: usize,
    levels: &[Vec<usize>],
    reversed: bool,
) -> Result<SmallDiameterRun, ConstructError> {
    let ids = padded_path_ids(base);
    let bound = path_span(&lt, &ids);
    let mut spans = vec![bound];
    for (step, pair) in levels.windows(2).enumerate() {
        let anchors = ids
            .iter()
            .zip(pair[0].iter().zip(&pair[1]))
            .filter(|(_, (a, b))| b > a)
            .map(|(&v, (a, b))| (v, b - a))
            .collect();
        lt = add_pendants(&lt, &PendantPlan::new(anchors)?)?;
        let dim = path_span(&lt, &ids);
        spans.push(dim);
        if dim > bound {
            return Err(ConstructError::SpanExceeded {
                step: step + 1,
                dim,
                bound,
            });
        }
    }
    let mut path: Vec<usize> = ids[offset..offset + target.k()].to_vec();
    if reversed {
        path.reverse();
    }
    let perm = caterpillar_numbering(&lt.tree, &path, target)
        .ok_or_else(|| ConstructError::NoAlignment(target.to_string()))?;
    let labeled = lt.relabeled(&perm);
    debug_assert_eq!(labeled.tree, build_caterpillar(target));
    Ok(SmallDiameterRun {
        labeled,
        base: base.clone(),
        spans,
    })
}

/// Labels an odd-degree caterpillar with `2^n >= 2^(diameter - 1)`
/// vertices.
pub fn label_large_caterpillar(spec: &CaterpillarSpec) -> Result<LabeledTree, ConstructError> {
    let count = check_odd_power(spec)?;
    let needed = 1usize << (spec.diameter() - 1).min(usize::BITS as usize - 1);
    if count < needed {
        return Err(ConstructError::TooFewVertices {
            vertices: count,
            needed,
        });
    }
    large(spec)
}

fn large(target: &CaterpillarSpec) -> Result<LabeledTree, ConstructError> {
    if target.diameter() <= 2 {
        return label_small_diameter(target);
    }
    // orient so the first endpoint has the smaller degree
    let d0 = target.degrees();
    let reversed = d0[0] > d0[d0.len() - 1];
    let oriented = if reversed {
        target.reversed()
    } else {
        target.clone()
    };
    let d = oriented.degrees();
    let k = d.len();

    let mut rem = vec![0usize; k];
    rem[0] = d[0] - 1;
    let mut left = target.vertex_count() / 2 - rem[0];
    let floor = |i: usize| if i == k - 1 { 1 } else { 3 };
    while left > 0 {
        let pick = (1..k)
            .filter(|&i| d[i] - rem[i] >= floor(i) + 2)
            .max_by_key(|&i| (d[i] - rem[i] - floor(i), std::cmp::Reverse(i)));
        let i = pick.ok_or_else(|| ConstructError::NoAlignment(target.to_string()))?;
        rem[i] += 2;
        left -= 2;
    }

    // smaller caterpillar: index 0 became a leaf, and possibly index k-1
    let last = if d[k - 1] - rem[k - 1] == 1 { k - 1 } else { k };
    let kept: Vec<usize> = (1..last).collect();
    let smaller_spec = if kept.is_empty() {
        CaterpillarSpec::new(vec![1])?
    } else {
        CaterpillarSpec::new(kept.iter().map(|&i| d[i] - rem[i]).collect())?
    };
    let smaller = large(&smaller_spec)?;
    let s_count = smaller_spec.vertex_count();

    // ids in the smaller tree of the oriented path positions
    let mut id_of = vec![usize::MAX; k];
    if kept.is_empty() {
        id_of[0] = 0;
        id_of[1] = 1;
    } else {
        for (j, &i) in kept.iter().enumerate() {
            id_of[i] = j;
        }
        // first pendant of the smaller tree's first path vertex
        id_of[0] = kept.len();
        if last == k - 1 {
            id_of[k - 1] = s_count - 1;
        }
    }
    let anchors = (0..k)
        .filter(|&i| rem[i] > 0)
        .map(|i| (id_of[i], rem[i]))
        .collect();
    let grown = add_pendants(&smaller, &PendantPlan::new(anchors)?)?;
    let mut path = id_of;
    if reversed {
        path.reverse();
    }
    let perm = caterpillar_numbering(&grown.tree, &path, target)
        .ok_or_else(|| ConstructError::NoAlignment(target.to_string()))?;
    Ok(grown.relabeled(&perm))
}
