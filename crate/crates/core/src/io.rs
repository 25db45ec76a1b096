//! Text formats: IST datasets, homology tables, pair and set results.
//!
//! IST is line oriented. `>ID` opens a string, a line holding only `#`
//! separates two contigs, `%` starts a comment line, empty lines are
//! ignored, and any other line is one position given as whitespace
//! separated character labels.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{BufRead, BufReader, Read, Write};

use serde::{Deserialize, Serialize};

use crate::assemble::AwciSet;
use crate::enumerate::AwciPair;
use crate::error::{Error, Location, Result};
use crate::model::{Alphabet, Dataset, IndeterminateString, Interval, SearchParams};

pub const PAIRS_HEADER: &str = "#awci-pairs v1";
pub const PAIRS_COLUMNS: &str = "#stringA\tiA\tjA\tstringB\tkB\tlB\tindels\tsizeA\tsizeB\tcommonSetSize";
pub const SETS_HEADER: &str = "#awci-sets v1";
pub const SETS_COLUMNS: &str = "#closed\tdelta\tquorum\tmembers";

fn read_lines(input: impl Read) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (n, line) in BufReader::new(input).lines().enumerate() {
        let line = line.map_err(|e| match e.kind() {
            std::io::ErrorKind::InvalidData => Error::format(n + 1, 1, "line is not valid UTF-8"),
            _ => Error::Io(e),
        })?;
        out.push(line.strip_suffix('\r').map(str::to_string).unwrap_or(line));
    }
    Ok(out)
}

/// Column (1-based, in characters) of the byte offset `at` in `line`.
fn column(line: &str, at: usize) -> usize {
    line[..at].chars().count() + 1
}

struct Pending {
    id: String,
    line: usize,
    sets: Vec<Vec<crate::CharId>>,
    breaks: Vec<usize>,
    last_break_line: Option<usize>,
}

/// Parses an IST dataset.
pub fn parse_ist(input: impl Read) -> Result<Dataset> {
    let lines = read_lines(input)?;
    let mut alphabet = Alphabet::new();
    let mut strings: Vec<IndeterminateString> = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut cur: Option<Pending> = None;

    let finish = |p: Pending, strings: &mut Vec<IndeterminateString>| -> Result<()> {
        if p.sets.is_empty() {
            return Err(Error::format(p.line, 1, format!("string `{}` has no positions", p.id)));
        }
        if let (Some(&b), Some(l)) = (p.breaks.last(), p.last_break_line) {
            if b == p.sets.len() {
                return Err(Error::format(l, 1, "contig break after the last position"));
            }
        }
        strings.push(IndeterminateString::new(p.id, p.sets, p.breaks)?);
        Ok(())
    };

    for (n, line) in lines.iter().enumerate() {
        let ln = n + 1;
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('>') {
            let id = rest.trim();
            if id.is_empty() {
                return Err(Error::format(ln, 2, "missing string id"));
            }
            if let Some(at) = id.find(char::is_whitespace) {
                let off = line.len() - rest.len() + rest.find(id).unwrap_or(0) + at;
                return Err(Error::format(ln, column(line, off), "string id contains whitespace"));
            }
            if let Some(prev) = seen.insert(id.to_string(), ln) {
                return Err(Error::format(ln, 2, format!("duplicate string id `{id}` (first on line {prev})")));
            }
            if let Some(p) = cur.take() {
                finish(p, &mut strings)?;
            }
            cur = Some(Pending {
                id: id.to_string(),
                line: ln,
                sets: Vec::new(),
                breaks: Vec::new(),
                last_break_line: None,
            });
            continue;
        }
        let Some(p) = cur.as_mut() else {
            return Err(Error::format(ln, 1, "position before the first `>ID` line"));
        };
        if line.trim() == "#" {
            let at = p.sets.len();
            if at == 0 {
                return Err(Error::format(ln, 1, "contig break before the first position"));
            }
            if p.breaks.last() == Some(&at) {
                return Err(Error::format(ln, 1, "empty contig"));
            }
            p.breaks.push(at);
            p.last_break_line = Some(ln);
            continue;
        }
        if line.trim().is_empty() {
            return Err(Error::format(ln, 1, "empty position set"));
        }
        let mut set = Vec::new();
        for (at, label) in split_with_offsets(line) {
            let id = alphabet
                .intern(label)
                .map_err(|_| Error::format(ln, column(line, at), format!("bad label `{label}`")))?;
            set.push(id);
        }
        p.sets.push(set);
    }
    if let Some(p) = cur.take() {
        finish(p, &mut strings)?;
    }
    let mut ds = Dataset::new(alphabet);
    for s in strings {
        ds.push(s)?;
    }
    Ok(ds)
}

fn split_with_offsets(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split(char::is_whitespace)
        .scan(0usize, |pos, tok| {
            let at = *pos;
            *pos += tok.len() + 1;
            Some((at, tok))
        })
        .filter(|(_, t)| !t.is_empty())
}

fn check_label(label: &str) -> Result<()> {
    if label.is_empty()
        || label == "#"
        || label.starts_with('>')
        || label.starts_with('%')
        || label.contains(char::is_whitespace)
    {
        return Err(Error::BadLabel(label.to_string()));
    }
    Ok(())
}

fn check_id(id: &str) -> Result<()> {
    if id.is_empty() || id.contains(char::is_whitespace) || id.contains('[') {
        return Err(Error::Validation(format!("string id `{id}` cannot be written")));
    }
    Ok(())
}

/// Writes a dataset as IST; fails on labels or ids the parser would read
/// differently.
pub fn write_ist(ds: &Dataset, mut out: impl Write) -> Result<usize> {
    let mut buf = String::new();
    for s in ds.strings() {
        check_id(s.id())?;
        buf.push('>');
        buf.push_str(s.id());
        buf.push('\n');
        for (n, set) in s.positions().iter().enumerate() {
            if s.breaks().contains(&n) {
                buf.push_str("#\n");
            }
            for (k, c) in set.iter().enumerate() {
                let label = ds.alphabet().label(*c);
                check_label(label)?;
                if k > 0 {
                    buf.push(' ');
                }
                buf.push_str(label);
            }
            buf.push('\n');
        }
    }
    out.write_all(buf.as_bytes())?;
    Ok(buf.len())
}

/// One pairwise homology hit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomologyRecord {
    pub genome_a: String,
    pub gene_a: String,
    pub genome_b: String,
    pub gene_b: String,
    pub score: f64,
}

/// Ordered genes of one genome with contig breaks (break `p` separates
/// genes `p` and `p + 1`, 1-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneOrder {
    pub genome: String,
    pub genes: Vec<String>,
    pub breaks: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct HomologyTable {
    pub records: Vec<HomologyRecord>,
    pub genomes: Vec<GeneOrder>,
}

/// Parses tab separated `genomeA geneA genomeB geneB score` lines; empty
/// lines and lines starting with `#` are skipped.
pub fn parse_homology_records(input: impl Read) -> Result<Vec<HomologyRecord>> {
    let mut out = Vec::new();
    for (n, line) in read_lines(input)?.iter().enumerate() {
        let ln = n + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 5 {
            return Err(Error::format(ln, 1, format!("expected 5 tab separated fields, found {}", fields.len())));
        }
        for (k, f) in fields.iter().enumerate().take(4) {
            if f.trim().is_empty() {
                let at: usize = fields[..k].iter().map(|f| f.len() + 1).sum();
                return Err(Error::format(ln, column(line, at), "empty field"));
            }
        }
        let at: usize = fields[..4].iter().map(|f| f.len() + 1).sum();
        let score: f64 = fields[4]
            .trim()
            .parse()
            .map_err(|_| Error::format(ln, column(line, at), format!("bad score `{}`", fields[4])))?;
        if !score.is_finite() || score < 0.0 {
            return Err(Error::format(ln, column(line, at), format!("score {score} is not finite and non-negative")));
        }
        out.push(HomologyRecord {
            genome_a: fields[0].trim().to_string(),
            gene_a: fields[1].trim().to_string(),
            genome_b: fields[2].trim().to_string(),
            gene_b: fields[3].trim().to_string(),
            score,
        });
    }
    Ok(out)
}

/// Parses a gene order file: one gene id per line, `#` for a contig break.
pub fn parse_gene_order(genome: &str, input: impl Read) -> Result<GeneOrder> {
    let mut genes = Vec::new();
    let mut breaks: Vec<usize> = Vec::new();
    let mut last_break = 0;
    for (n, line) in read_lines(input)?.iter().enumerate() {
        let ln = n + 1;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if t == "#" {
            if genes.is_empty() || breaks.last() == Some(&genes.len()) {
                return Err(Error::format(ln, 1, "contig break without genes before it"));
            }
            breaks.push(genes.len());
            last_break = ln;
            continue;
        }
        genes.push(t.to_string());
    }
    if breaks.last().is_some_and(|&b| b == genes.len()) {
        return Err(Error::format(last_break, 1, "contig break after the last gene"));
    }
    if genes.is_empty() {
        return Err(Error::Validation(format!("genome `{genome}` lists no genes")));
    }
    Ok(GeneOrder {
        genome: genome.to_string(),
        genes,
        breaks,
    })
}

/// One string per genome. Every accepted record (`score >= threshold`,
/// not a gene against itself) mints a character `h:<n>` carried by both of
/// its genes; every gene also carries its private character
/// `g:<genome>:<gene>`. Records are sorted first, so the result does not
/// depend on their order.
pub fn homology_to_strings(table: &HomologyTable, threshold: f64) -> Result<Dataset> {
    let mut where_is: HashMap<(&str, &str), (usize, usize)> = HashMap::new();
    let mut genome_ids = HashSet::new();
    for (g, order) in table.genomes.iter().enumerate() {
        if !genome_ids.insert(order.genome.as_str()) {
            return Err(Error::Validation(format!("duplicate genome `{}`", order.genome)));
        }
        for (p, gene) in order.genes.iter().enumerate() {
            if where_is.insert((&order.genome, gene), (g, p)).is_some() {
                return Err(Error::Validation(format!(
                    "gene `{gene}` listed twice in genome `{}`",
                    order.genome
                )));
            }
        }
    }
    let mut labels: Vec<Vec<Vec<String>>> = table
        .genomes
        .iter()
        .map(|o| o.genes.iter().map(|g| vec![format!("g:{}:{g}", o.genome)]).collect())
        .collect();

    let mut records: Vec<&HomologyRecord> = table.records.iter().collect();
    for r in &records {
        for (genome, gene) in [(&r.genome_a, &r.gene_a), (&r.genome_b, &r.gene_b)] {
            if !where_is.contains_key(&(genome.as_str(), gene.as_str())) {
                return Err(Error::Validation(format!("unknown gene `{gene}` of genome `{genome}`")));
            }
        }
        if !r.score.is_finite() || r.score < 0.0 {
            return Err(Error::Validation(format!("bad score {}", r.score)));
        }
    }
    records.sort_by(|a, b| {
        (&a.genome_a, &a.gene_a, &a.genome_b, &a.gene_b)
            .cmp(&(&b.genome_a, &b.gene_a, &b.genome_b, &b.gene_b))
            .then(a.score.total_cmp(&b.score))
    });
    let mut minted = 0usize;
    for r in records {
        if r.score < threshold || (r.genome_a == r.genome_b && r.gene_a == r.gene_b) {
            continue;
        }
        let label = format!("h:{minted}");
        minted += 1;
        for key in [(r.genome_a.as_str(), r.gene_a.as_str()), (r.genome_b.as_str(), r.gene_b.as_str())] {
            let (g, p) = where_is[&key];
            if !labels[g][p].contains(&label) {
                labels[g][p].push(label.clone());
            }
        }
    }
    let mut alphabet = Alphabet::new();
    let mut ds_strings = Vec::new();
    for (order, sets) in table.genomes.iter().zip(&labels) {
        ds_strings.push(IndeterminateString::from_labels(
            &mut alphabet,
            order.genome.clone(),
            sets,
            order.breaks.iter().copied(),
        )?);
    }
    let mut ds = Dataset::new(alphabet);
    for s in ds_strings {
        ds.push(s)?;
    }
    Ok(ds)
}

/// Writes pairs as TSV in the given order.
pub fn write_pairs<'p>(
    ds: &Dataset,
    pairs: impl IntoIterator<Item = &'p AwciPair>,
    mut out: impl Write,
) -> Result<usize> {
    let mut n = 0;
    let head = format!("{PAIRS_HEADER}\n{PAIRS_COLUMNS}\n");
    out.write_all(head.as_bytes())?;
    n += head.len();
    for p in pairs {
        n += write_pair_row(ds, p, &mut out)?;
    }
    Ok(n)
}

/// One TSV row of the pairs format.
pub fn write_pair_row(ds: &Dataset, p: &AwciPair, mut out: impl Write) -> Result<usize> {
    let row = format!(
        "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
        ds.string(p.left.string).id(),
        p.left.start,
        p.left.end,
        ds.string(p.right.string).id(),
        p.right.start,
        p.right.end,
        p.indel_total,
        p.size_left,
        p.size_right,
        p.common.len()
    );
    out.write_all(row.as_bytes())?;
    Ok(row.len())
}

/// A set record as stored in the sets format, members by string id.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SetRecord {
    pub closed: bool,
    pub delta: usize,
    pub quorum: usize,
    pub members: Vec<(String, usize, usize)>,
}

impl SetRecord {
    pub fn from_set(ds: &Dataset, set: &AwciSet, params: &SearchParams) -> Self {
        Self {
            closed: set.closed,
            delta: params.delta,
            quorum: params.quorum,
            members: set
                .members
                .iter()
                .map(|iv| (ds.string(iv.string).id().to_string(), iv.start, iv.end))
                .collect(),
        }
    }

    /// Members as validated intervals of `ds`.
    pub fn resolve(&self, ds: &Dataset) -> Result<Vec<Interval>> {
        self.members
            .iter()
            .map(|(id, s, e)| {
                let x = ds
                    .index_of(id)
                    .ok_or_else(|| Error::Validation(format!("unknown string `{id}`")))?;
                ds.interval(x, *s, *e)
            })
            .collect()
    }
}

/// Writes set records; records are written in the given order.
pub fn write_set_records<'r>(records: impl IntoIterator<Item = &'r SetRecord>, mut out: impl Write) -> Result<usize> {
    let mut buf = format!("{SETS_HEADER}\n{SETS_COLUMNS}\n");
    for r in records {
        buf.push_str(&format!("{}\t{}\t{}", r.closed, r.delta, r.quorum));
        for (id, s, e) in &r.members {
            check_id(id)?;
            buf.push_str(&format!("\t{id}[{s},{e}]"));
        }
        buf.push('\n');
    }
    out.write_all(buf.as_bytes())?;
    Ok(buf.len())
}

/// Writes sets found with `params`.
pub fn write_sets<'s>(
    ds: &Dataset,
    sets: impl IntoIterator<Item = &'s AwciSet>,
    params: &SearchParams,
    out: impl Write,
) -> Result<usize> {
    let records: Vec<SetRecord> = sets.into_iter().map(|s| SetRecord::from_set(ds, s, params)).collect();
    write_set_records(&records, out)
}

/// Parses the sets format.
pub fn parse_sets(input: impl Read) -> Result<Vec<SetRecord>> {
    let lines = read_lines(input)?;
    match lines.first() {
        Some(h) if h == SETS_HEADER => {}
        _ => return Err(Error::format(1, 1, format!("expected `{SETS_HEADER}`"))),
    }
    let mut out = Vec::new();
    for (n, line) in lines.iter().enumerate().skip(1) {
        let ln = n + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() < 4 {
            return Err(Error::format(ln, 1, "expected closed, delta, quorum and members"));
        }
        let col = |k: usize| column(line, fields[..k].iter().map(|f| f.len() + 1).sum());
        let closed = match fields[0] {
            "true" => true,
            "false" => false,
            other => return Err(Error::format(ln, 1, format!("bad closed flag `{other}`"))),
        };
        let num = |k: usize| -> Result<usize> {
            fields[k]
                .parse()
                .map_err(|_| Error::format(ln, col(k), format!("bad number `{}`", fields[k])))
        };
        let delta = num(1)?;
        let quorum = num(2)?;
        let mut members = Vec::new();
        for k in 3..fields.len() {
            members.push(parse_member(fields[k]).ok_or_else(|| {
                Error::format(ln, col(k), format!("bad member `{}`, expected ID[i,j]", fields[k]))
            })?);
        }
        out.push(SetRecord {
            closed,
            delta,
            quorum,
            members,
        });
    }
    Ok(out)
}

fn parse_member(f: &str) -> Option<(String, usize, usize)> {
    let body = f.strip_suffix(']')?;
    let (id, range) = body.rsplit_once('[')?;
    let (s, e) = range.split_once(',')?;
    if id.is_empty() {
        return None;
    }
    Some((id.to_string(), s.parse().ok()?, e.parse().ok()?))
}

/// Reads gene order files from `paths`; each genome is named by its file stem.
pub fn read_gene_orders(paths: &[std::path::PathBuf]) -> Result<Vec<GeneOrder>> {
    let mut by_name = BTreeMap::new();
    for p in paths {
        let name = p
            .file_stem()
            .and_then(|s| s.to_str())
            .ok_or_else(|| Error::Validation(format!("cannot name genome from {}", p.display())))?
            .to_string();
        let order = parse_gene_order(&name, std::fs::File::open(p)?)?;
        if by_name.insert(name.clone(), order).is_some() {
            return Err(Error::Validation(format!("two gene order files for genome `{name}`")));
        }
    }
    Ok(by_name.into_values().collect())
}

#[doc(hidden)]
pub fn location_of(e: &Error) -> Option<Location> {
    match e {
        Error::Format { location, .. } => Some(*location),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::oracle;

    #[test]
    fn three_genomes_lengths() {
        let ds = fixtures::three_genomes();
        let lens: Vec<usize> = ds.strings().iter().map(|s| s.len()).collect();
        assert_eq!(lens, vec![12, 11, 13]);
        assert_eq!(ds.string(0).cardinality(), 22);
    }

    #[test]
    fn ist_round_trip() {
        let text = ">A\na b\n#\nc\n% note\n\n>B\nc\na\n";
        let ds = parse_ist(text.as_bytes()).unwrap();
        assert_eq!(ds.string(0).breaks().iter().copied().collect::<Vec<_>>(), vec![1]);
        let mut out = Vec::new();
        write_ist(&ds, &mut out).unwrap();
        let again = parse_ist(&out[..]).unwrap();
        assert_eq!(ds, again);
        assert_eq!(String::from_utf8(out).unwrap(), ">A\na b\n#\nc\n>B\nc\na\n");
    }

    #[test]
    fn ist_errors_carry_locations() {
        let cases: &[(&str, (usize, usize))] = &[
            (">A\na\n  \n", (3, 1)),
            (">A\na\n>A\nb\n", (3, 2)),
            ("a\n", (1, 1)),
            (">A\n#\na\n", (2, 1)),
            (">A\na\n#\n", (3, 1)),
            (">A\n>B\na\n", (1, 1)),
            (">\na\n", (1, 2)),
        ];
        for (text, (line, col)) in cases {
            let e = parse_ist(text.as_bytes()).unwrap_err();
            let loc = location_of(&e).unwrap_or_else(|| panic!("{text:?}: {e}"));
            assert_eq!((loc.line, loc.column), (*line, *col), "{text:?}");
        }
    }

    #[test]
    fn writer_rejects_misparsing_labels() {
        for bad in ["#", ">x", "%c"] {
            let ds = Dataset::from_labels(&[("A", vec![vec![bad]], vec![])]).unwrap();
            assert!(matches!(write_ist(&ds, Vec::new()), Err(Error::BadLabel(_))));
        }
    }

    fn two_genome_table() -> HomologyTable {
        HomologyTable {
            records: vec![
                HomologyRecord {
                    genome_a: "A".into(),
                    gene_a: "a2".into(),
                    genome_b: "B".into(),
                    gene_b: "b2".into(),
                    score: 50.0,
                },
                HomologyRecord {
                    genome_a: "A".into(),
                    gene_a: "a1".into(),
                    genome_b: "B".into(),
                    gene_b: "b1".into(),
                    score: 80.0,
                },
            ],
            genomes: vec![
                GeneOrder {
                    genome: "A".into(),
                    genes: vec!["a1".into(), "a2".into(), "a3".into()],
                    breaks: vec![],
                },
                GeneOrder {
                    genome: "B".into(),
                    genes: vec!["b1".into(), "b2".into()],
                    breaks: vec![],
                },
            ],
        }
    }

    #[test]
    fn homology_pairs_form_common_intervals() {
        let ds = homology_to_strings(&two_genome_table(), 10.0).unwrap();
        let v = oracle::judge_pair(&ds, &Interval::new(0, 1, 2), &Interval::new(1, 1, 2), 0).unwrap();
        assert!(v.is_wci);
        // a3 has no homolog: trivial against B
        let idx = crate::index::PairIndex::build(&ds);
        assert!(idx.ridge_c(0, 1).is_trivial(3));
        assert!(!idx.ridge_c(0, 1).is_trivial(2));
    }

    #[test]
    fn homology_minting_ignores_record_order() {
        let t = two_genome_table();
        let mut r = t.clone();
        r.records.reverse();
        let a = homology_to_strings(&t, 0.0).unwrap();
        let b = homology_to_strings(&r, 0.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn homology_threshold_and_dangling_genes() {
        let ds = homology_to_strings(&two_genome_table(), 60.0).unwrap();
        assert_eq!(ds.string(0).at(2).len(), 1);
        let empty = HomologyTable {
            records: vec![],
            ..two_genome_table()
        };
        let ds = homology_to_strings(&empty, 0.0).unwrap();
        assert!(ds.strings().iter().all(|s| s.positions().iter().all(|p| p.len() == 1)));
        let mut bad = two_genome_table();
        bad.records[0].gene_b = "zz".into();
        assert!(matches!(homology_to_strings(&bad, 0.0), Err(Error::Validation(_))));
    }

    #[test]
    fn homology_records_parse() {
        let text = "#genomeA\tgeneA\tgenomeB\tgeneB\tscore\nA\ta1\tB\tb1\t3.5\n";
        let r = parse_homology_records(text.as_bytes()).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].score, 3.5);
        let e = parse_homology_records("A\ta1\tB\tb1\tx\n".as_bytes()).unwrap_err();
        assert_eq!(location_of(&e).map(|l| (l.line, l.column)), Some((1, 11)));
        assert!(parse_homology_records("A\ta1\tB\tb1\t-1\n".as_bytes()).is_err());
        let g = parse_gene_order("A", "a1\na2\n#\na3\n".as_bytes()).unwrap();
        assert_eq!(g.breaks, vec![2]);
    }

    #[test]
    fn sets_round_trip() {
        let ds = fixtures::three_genomes();
        let params = SearchParams::new(1, 3, 6).unwrap();
        let set = AwciSet::new(
            &ds,
            vec![Interval::new(0, 1, 8), Interval::new(1, 2, 7), Interval::new(2, 1, 8)],
            true,
        );
        let mut out = Vec::new();
        write_sets(&ds, [&set], &params, &mut out).unwrap();
        let text = String::from_utf8(out.clone()).unwrap();
        assert_eq!(
            text,
            "#awci-sets v1\n#closed\tdelta\tquorum\tmembers\ntrue\t1\t3\tS1[1,8]\tS2[2,7]\tS3[1,8]\n"
        );
        let back = parse_sets(&out[..]).unwrap();
        assert_eq!(back, vec![SetRecord::from_set(&ds, &set, &params)]);
        assert_eq!(back[0].resolve(&ds).unwrap(), set.members);
    }

    #[test]
    fn empty_results_are_header_only() {
        let ds = fixtures::three_genomes();
        let mut out = Vec::new();
        write_pairs(&ds, &[], &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), format!("{PAIRS_HEADER}\n{PAIRS_COLUMNS}\n"));
        let mut out = Vec::new();
        write_sets(&ds, &[], &SearchParams::default(), &mut out).unwrap();
        assert_eq!(parse_sets(&out[..]).unwrap(), vec![]);
    }
}
