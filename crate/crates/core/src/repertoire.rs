//! The paired store of achieved outcomes and the policies that produced them.
//!
//! Outcomes are kept as sparse differences against the first stored outcome.
//! Image observations are mostly background, so two frames differ on a few
//! hundred of their 7500 channels; merging the difference lists gives the
//! same squared distance, bit for bit, as a dense left-to-right sum because
//! the skipped terms are exact zeros.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{check_dim, Error, Result};
use crate::sensor::{squared_distance, PolicyParams, SensorVector};

/// Queries with more than this fraction of channels away from the reference
/// take the dense route.
const DENSE_QUERY_FRACTION: usize = 4;
/// Below this dimension every query is merged exactly.
const SMALL_DIM: usize = 64;

#[derive(Clone, Debug, Default, PartialEq)]
struct Code {
    idx: Vec<u32>,
    val: Vec<f64>,
}

impl Code {
    fn encode(values: &[f64], reference: &[f64]) -> Code {
        let mut code = Code::default();
        for (i, (v, r)) in values.iter().zip(reference).enumerate() {
            if v != r {
                code.idx.push(i as u32);
                code.val.push(*v);
            }
        }
        code
    }

    fn decode(&self, reference: &[f64]) -> Vec<f64> {
        let mut values = reference.to_vec();
        for (&i, &v) in self.idx.iter().zip(&self.val) {
            values[i as usize] = v;
        }
        values
    }
}

/// Exact squared distance between two codes sharing `reference`.
fn merged_squared(a: &Code, b: &Code, reference: &[f64]) -> f64 {
    let (mut i, mut j) = (0, 0);
    let mut sum = 0.0;
    loop {
        let d = match (a.idx.get(i), b.idx.get(j)) {
            (Some(&ia), Some(&jb)) if ia == jb => {
                i += 1;
                j += 1;
                a.val[i - 1] - b.val[j - 1]
            }
            (Some(&ia), Some(&jb)) if ia < jb => {
                i += 1;
                a.val[i - 1] - reference[ia as usize]
            }
            (Some(_), Some(&jb)) => {
                j += 1;
                reference[jb as usize] - b.val[j - 1]
            }
            (Some(&ia), None) => {
                i += 1;
                a.val[i - 1] - reference[ia as usize]
            }
            (None, Some(&jb)) => {
                j += 1;
                reference[jb as usize] - b.val[j - 1]
            }
            (None, None) => return sum,
        };
        sum += d * d;
    }
}

/// A query vector prepared against a repertoire's reference outcome.
enum Prepared<'q> {
    Sparse(Code),
    /// `base` is the squared distance from the query to the reference.
    Dense { values: &'q [f64], base: f64 },
}

/// Ordered store of `(outcome, policy)` pairs; index `i` pairs outcome `i`
/// with policy `i`. Duplicates are kept.
#[derive(Clone, Debug, PartialEq)]
pub struct Repertoire {
    outcome_dim: usize,
    policy_dim: usize,
    reference: Vec<f64>,
    codes: Vec<Code>,
    policies: Vec<PolicyParams>,
}

impl Repertoire {
    pub fn new(outcome_dim: usize, policy_dim: usize) -> Self {
        Repertoire {
            outcome_dim,
            policy_dim,
            reference: Vec::new(),
            codes: Vec::new(),
            policies: Vec::new(),
        }
    }

    /// A repertoire holding a single seed pair.
    pub fn seeded(outcome: SensorVector, policy: PolicyParams) -> Self {
        let mut r = Repertoire::new(outcome.len(), policy.len());
        r.reference = outcome.into_inner();
        r.codes.push(Code::default());
        r.policies.push(policy);
        r
    }

    pub fn len(&self) -> usize {
        self.policies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.policies.is_empty()
    }

    pub fn outcome_dim(&self) -> usize {
        self.outcome_dim
    }

    pub fn policy_dim(&self) -> usize {
        self.policy_dim
    }

    /// Appends a pair. Size grows by exactly one; existing pairs are untouched.
    pub fn add(&mut self, outcome: SensorVector, policy: PolicyParams) -> Result<()> {
        check_dim(self.outcome_dim, outcome.len())?;
        check_dim(self.policy_dim, policy.len())?;
        if self.is_empty() {
            self.reference = outcome.into_inner();
            self.codes.push(Code::default());
        } else {
            self.codes
                .push(Code::encode(outcome.values(), &self.reference));
        }
        self.policies.push(policy);
        Ok(())
    }

    pub fn outcome(&self, index: usize) -> SensorVector {
        SensorVector::new(self.codes[index].decode(&self.reference))
    }

    pub fn outcomes(&self) -> impl Iterator<Item = SensorVector> + '_ {
        (0..self.len()).map(|i| self.outcome(i))
    }

    pub fn policy(&self, index: usize) -> &PolicyParams {
        &self.policies[index]
    }

    pub fn policies(&self) -> &[PolicyParams] {
        &self.policies
    }

    /// The first `len` pairs. Since pairs are only ever appended, this is
    /// the repertoire as it stood after `len - 1` trials.
    pub fn truncated(&self, len: usize) -> Repertoire {
        let len = len.min(self.len());
        Repertoire {
            outcome_dim: self.outcome_dim,
            policy_dim: self.policy_dim,
            reference: if len == 0 { Vec::new() } else { self.reference.clone() },
            codes: self.codes[..len].to_vec(),
            policies: self.policies[..len].to_vec(),
        }
    }

    /// Distance between two stored outcomes; identical to
    /// [`crate::euclidean_distance`] on the decoded vectors.
    pub fn distance_between(&self, i: usize, j: usize) -> f64 {
        merged_squared(&self.codes[i], &self.codes[j], &self.reference).sqrt()
    }

    /// Appends to `row` the distances from outcome `i` to outcomes `0..i`.
    pub(crate) fn distances_before(&self, i: usize, row: &mut Vec<f64>) {
        let code = &self.codes[i];
        row.extend(
            self.codes[..i]
                .iter()
                .map(|other| merged_squared(code, other, &self.reference).sqrt()),
        );
    }

    fn prepare<'q>(&self, query: &'q SensorVector) -> Prepared<'q> {
        let values = query.values();
        let code = Code::encode(values, &self.reference);
        if self.outcome_dim > SMALL_DIM && code.idx.len() * DENSE_QUERY_FRACTION > self.outcome_dim
        {
            Prepared::Dense {
                values,
                base: squared_distance(values, &self.reference),
            }
        } else {
            Prepared::Sparse(code)
        }
    }

    fn squared_to(&self, query: &Prepared<'_>, index: usize) -> f64 {
        let stored = &self.codes[index];
        match query {
            Prepared::Sparse(code) => merged_squared(code, stored, &self.reference),
            Prepared::Dense { values, base } => {
                // Swap the reference's contribution for the stored outcome's
                // on its support. Exact in real arithmetic; may differ from
                // the dense sum in the last bits, but is exactly zero when
                // the query equals the stored outcome.
                let mut adjust = 0.0;
                for (&i, &v) in stored.idx.iter().zip(&stored.val) {
                    let q = values[i as usize];
                    let to_stored = (q - v) * (q - v);
                    let to_ref = (q - self.reference[i as usize]) * (q - self.reference[i as usize]);
                    adjust += to_stored - to_ref;
                }
                (base + adjust).max(0.0)
            }
        }
    }

    /// Distances from `query` to every stored outcome, in index order.
    pub fn distances_to(&self, query: &SensorVector) -> Result<Vec<f64>> {
        check_dim(self.outcome_dim, query.len())?;
        let prepared = self.prepare(query);
        Ok((0..self.len())
            .map(|i| self.squared_to(&prepared, i).sqrt())
            .collect())
    }

    /// Index of the stored outcome nearest to `query`; ties go to the lowest
    /// index.
    pub fn nearest(&self, query: &SensorVector) -> Result<usize> {
        check_dim(self.outcome_dim, query.len())?;
        if self.is_empty() {
            return Err(Error::EmptyRepertoire);
        }
        let prepared = self.prepare(query);
        let mut best = (0, f64::INFINITY);
        for i in 0..self.len() {
            let d = self.squared_to(&prepared, i);
            if d < best.1 {
                best = (i, d);
            }
        }
        Ok(best.0)
    }

    /// The `k` stored outcomes nearest to `query` as `(index, distance)`,
    /// ordered by distance then index. Returns fewer when the store is
    /// smaller than `k`.
    pub fn k_nearest(&self, query: &SensorVector, k: usize) -> Result<Vec<(usize, f64)>> {
        check_dim(self.outcome_dim, query.len())?;
        if self.is_empty() {
            return Err(Error::EmptyRepertoire);
        }
        let prepared = self.prepare(query);
        let mut best = smallest_k((0..self.len()).map(|i| (i, self.squared_to(&prepared, i))), k);
        for entry in &mut best {
            entry.1 = entry.1.sqrt();
        }
        Ok(best)
    }

    /// Writes the dump format: header `index,outcome_0..,policy_0..`, one row
    /// per pair, values in shortest round-trip decimal form.
    pub fn write_csv<W: Write>(&self, writer: W) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(writer);
        let mut header = vec!["index".to_string()];
        header.extend((0..self.outcome_dim).map(|i| format!("outcome_{i}")));
        header.extend((0..self.policy_dim).map(|i| format!("policy_{i}")));
        w.write_record(&header)?;
        let mut record = Vec::with_capacity(header.len());
        for i in 0..self.len() {
            record.clear();
            record.push(i.to_string());
            record.extend(self.outcome(i).values().iter().map(f64::to_string));
            record.extend(self.policies[i].values().iter().map(f64::to_string));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Parses a dump written by [`Repertoire::write_csv`]. `origin` is only
    /// used in error messages.
    pub fn read_csv<R: Read>(reader: R, origin: &Path) -> Result<Repertoire> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let header = rdr.headers().map_err(|e| Error::parse(origin, e))?.clone();
        if header.get(0) != Some("index") {
            return Err(Error::parse(origin, "first column must be `index`"));
        }
        let outcome_dim = header.iter().filter(|h| h.starts_with("outcome_")).count();
        let policy_dim = header.iter().filter(|h| h.starts_with("policy_")).count();
        if 1 + outcome_dim + policy_dim != header.len() {
            return Err(Error::parse(origin, "unexpected column in header"));
        }
        let mut rep = Repertoire::new(outcome_dim, policy_dim);
        for (row, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::parse(origin, e))?;
            let mut fields = record.iter().map(|f| {
                f.parse::<f64>()
                    .map_err(|e| Error::parse(origin, format!("row {row}: `{f}`: {e}")))
            });
            let index = fields.next().transpose()?;
            if index != Some(row as f64) {
                return Err(Error::parse(origin, format!("row {row}: index out of sequence")));
            }
            let values = fields.collect::<Result<Vec<f64>>>()?;
            if values.len() != outcome_dim + policy_dim {
                return Err(Error::parse(origin, format!("row {row}: wrong field count")));
            }
            let (o, p) = values.split_at(outcome_dim);
            rep.add(o.to_vec().into(), p.to_vec().into())?;
        }
        Ok(rep)
    }
}

/// Keeps the `k` smallest `(index, value)` pairs of an index-ordered stream,
/// ordered by value then index.
pub(crate) fn smallest_k(items: impl Iterator<Item = (usize, f64)>, k: usize) -> Vec<(usize, f64)> {
    let mut best: Vec<(usize, f64)> = Vec::with_capacity(k + 1);
    if k == 0 {
        return best;
    }
    for (i, d) in items {
        if best.len() == k && d >= best[k - 1].1 {
            continue;
        }
        // later indices sort after equal values
        let pos = best.partition_point(|&(_, b)| b <= d);
        best.insert(pos, (i, d));
        best.truncate(k);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sensor::euclidean_distance;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(x: &[f64]) -> SensorVector {
        SensorVector::new(x.to_vec())
    }

    fn p(x: &[f64]) -> PolicyParams {
        PolicyParams::new(x.to_vec())
    }

    #[test]
    fn add_grows_by_one_and_keeps_duplicates() {
        let mut r = Repertoire::seeded(v(&[0.0, 0.0]), p(&[1.0]));
        r.add(v(&[0.5, 0.5]), p(&[2.0])).unwrap();
        assert_eq!(r.len(), 2);
        r.add(v(&[0.5, 0.5]), p(&[2.0])).unwrap();
        r.add(v(&[0.5, 0.5]), p(&[2.0])).unwrap();
        assert_eq!(r.len(), 4);
    }

    #[test]
    fn add_rejects_wrong_dimensions() {
        let mut r = Repertoire::seeded(v(&[0.0, 0.0]), p(&[1.0]));
        assert!(matches!(
            r.add(v(&[0.0]), p(&[1.0])),
            Err(Error::Dimension { expected: 2, actual: 1 })
        ));
        assert!(r.add(v(&[0.0, 0.0]), p(&[1.0, 2.0])).is_err());
        assert_eq!(r.len(), 1);
    }

    #[test]
    fn replay_oracle_after_many_insertions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut log = Vec::new();
        let mut r = Repertoire::new(3, 2);
        for _ in 0..1000 {
            // coarse values so that some channels coincide with the reference
            let o: Vec<f64> = (0..3).map(|_| (rng.random_range(0..4) as f64) / 4.0).collect();
            let q: Vec<f64> = (0..2).map(|_| rng.random()).collect();
            r.add(v(&o), p(&q)).unwrap();
            log.push((o, q));
        }
        for (i, (o, q)) in log.iter().enumerate() {
            assert_eq!(r.outcome(i).values(), &o[..]);
            assert_eq!(r.policy(i).values(), &q[..]);
        }
    }

    #[test]
    fn nearest_examples() {
        let r = Repertoire::seeded(v(&[0.0, 0.0]), p(&[0.0]));
        assert_eq!(r.nearest(&v(&[0.0, 0.0])).unwrap(), 0);
        let mut r = r;
        r.add(v(&[1.0, 0.0]), p(&[1.0])).unwrap();
        assert_eq!(r.nearest(&v(&[0.9, 0.0])).unwrap(), 1);
        assert_eq!(r.nearest(&v(&[1.0, 0.0])).unwrap(), 1);
    }

    #[test]
    fn nearest_on_empty_is_error() {
        let r = Repertoire::new(2, 1);
        assert!(matches!(r.nearest(&v(&[0.0, 0.0])), Err(Error::EmptyRepertoire)));
        assert!(matches!(r.k_nearest(&v(&[0.0, 0.0]), 2), Err(Error::EmptyRepertoire)));
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let mut r = Repertoire::seeded(v(&[1.0, 0.0]), p(&[0.0]));
        r.add(v(&[-1.0, 0.0]), p(&[1.0])).unwrap();
        r.add(v(&[1.0, 0.0]), p(&[2.0])).unwrap();
        assert_eq!(r.nearest(&v(&[0.0, 0.0])).unwrap(), 0);
        let k = r.k_nearest(&v(&[0.0, 0.0]), 2).unwrap();
        assert_eq!(k.iter().map(|e| e.0).collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn nearest_matches_linear_scan_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let outcomes: Vec<SensorVector> = (0..200)
            .map(|_| v(&[rng.random(), rng.random()]))
            .collect();
        let mut r = Repertoire::new(2, 1);
        for o in &outcomes {
            r.add(o.clone(), p(&[0.0])).unwrap();
        }
        for _ in 0..100 {
            let q = v(&[rng.random(), rng.random()]);
            let mut best = 0;
            for i in 1..outcomes.len() {
                if euclidean_distance(&outcomes[i], &q).unwrap()
                    < euclidean_distance(&outcomes[best], &q).unwrap()
                {
                    best = i;
                }
            }
            assert_eq!(r.nearest(&q).unwrap(), best);
        }
    }

    fn sparse_image(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
        let mut x = vec![1.0; dim];
        for _ in 0..60 {
            x[rng.random_range(0..dim)] = rng.random();
        }
        x
    }

    #[test]
    fn stored_distances_are_bit_identical_to_dense_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let images: Vec<Vec<f64>> = (0..30).map(|_| sparse_image(&mut rng, 7500)).collect();
        let mut r = Repertoire::new(7500, 1);
        for x in &images {
            r.add(v(x), p(&[0.0])).unwrap();
        }
        for i in 0..images.len() {
            for j in 0..images.len() {
                let dense = squared_distance(&images[i], &images[j]).sqrt();
                assert_eq!(r.distance_between(i, j).to_bits(), dense.to_bits());
            }
            // sparse query route
            let d = r.distances_to(&v(&images[i])).unwrap();
            for (j, x) in images.iter().enumerate() {
                assert_eq!(d[j].to_bits(), squared_distance(&images[i], x).sqrt().to_bits());
            }
        }
    }

    #[test]
    fn dense_queries_agree_with_dense_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let images: Vec<Vec<f64>> = (0..30).map(|_| sparse_image(&mut rng, 7500)).collect();
        let mut r = Repertoire::new(7500, 1);
        for x in &images {
            r.add(v(x), p(&[0.0])).unwrap();
        }
        for x in &images {
            let noisy: Vec<f64> = x.iter().map(|c| c + 0.05 * (rng.random::<f64>() - 0.5)).collect();
            let d = r.distances_to(&v(&noisy)).unwrap();
            for (j, y) in images.iter().enumerate() {
                let dense = squared_distance(&noisy, y).sqrt();
                assert!((d[j] - dense).abs() <= 1e-9 * dense.max(1.0));
            }
        }
        // exact self-match survives the dense route
        let mut dense_rep = Repertoire::new(7500, 1);
        let base: Vec<f64> = (0..7500).map(|_| rng.random()).collect();
        let other: Vec<f64> = (0..7500).map(|_| rng.random()).collect();
        dense_rep.add(v(&base), p(&[0.0])).unwrap();
        dense_rep.add(v(&other), p(&[1.0])).unwrap();
        assert_eq!(dense_rep.distances_to(&v(&other)).unwrap()[1], 0.0);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut r = Repertoire::new(2, 3);
        for _ in 0..20 {
            r.add(
                v(&[rng.random(), rng.random::<f64>() * 1e-7]),
                p(&[rng.random(), -rng.random::<f64>(), 1e300]),
            )
            .unwrap();
        }
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("index,outcome_0,outcome_1,policy_0,policy_1,policy_2\n"));
        let back = Repertoire::read_csv(&buf[..], Path::new("mem")).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn malformed_dump_is_parse_error() {
        let bad = "index,outcome_0,policy_0\n0,0.5,abc\n";
        assert!(matches!(
            Repertoire::read_csv(bad.as_bytes(), Path::new("mem")),
            Err(Error::Parse { .. })
        ));
        let skipped = "index,outcome_0,policy_0\n1,0.5,0.1\n";
        assert!(Repertoire::read_csv(skipped.as_bytes(), Path::new("mem")).is_err());
    }

    #[test]
    fn smallest_k_orders_by_value_then_index() {
        let items = [(0, 3.0), (1, 1.0), (2, 1.0), (3, 0.5), (4, 1.0)];
        assert_eq!(
            smallest_k(items.into_iter(), 3),
            vec![(3, 0.5), (1, 1.0), (2, 1.0)]
        );
        assert_eq!(smallest_k(items.into_iter(), 10).len(), 5);
    }
}
