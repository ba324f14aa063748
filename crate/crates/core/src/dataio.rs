//! Edge-file ingestion and dataset assembly.
//!
//! Edge files hold one `left_id<delim>right_id` pair per line (tab by
//! default). Blank lines and lines starting with `#` are skipped.

use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, CoupledDataset, Labels, NodeId, Side};

pub type EdgeList = Vec<(String, String)>;

/// Parses edge lines from any reader. `source` is only used in error messages.
pub fn parse_edges<R: Read>(reader: R, source: &Path, delimiter: char) -> Result<EdgeList> {
    let mut out = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches(['\r', '\n']);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(delimiter).collect();
        if fields.len() != 2 || fields.iter().any(|f| f.trim().is_empty()) {
            return Err(Error::Parse {
                path: source.to_path_buf(),
                line: i + 1,
                message: format!("expected 2 non-empty fields separated by {delimiter:?}, found {line:?}"),
            });
        }
        out.push((fields[0].trim().to_owned(), fields[1].trim().to_owned()));
    }
    Ok(out)
}

pub fn parse_edge_file(path: &Path, delimiter: char) -> Result<EdgeList> {
    parse_edges(File::open(path)?, path, delimiter)
}

/// Counts gathered while assembling a dataset. Kept, duplicate and removed
/// edges add up to the raw counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct IngestReport {
    pub raw_object_edges: usize,
    pub raw_group_edges: usize,
    pub duplicate_object_edges: usize,
    pub duplicate_group_edges: usize,
    /// users with object links but no group membership
    pub removed_users: usize,
    /// non-duplicate object links of removed users
    pub removed_object_edges: usize,
    pub kept_object_edges: usize,
    pub kept_group_edges: usize,
}

/// Builds the coupled dataset, keeping only users who joined at least one
/// group. Users are indexed by first appearance in the object edges, then in
/// the group edges; objects and groups by first appearance among kept edges.
pub fn assemble_dataset(user_object: &[(String, String)], user_group: &[(String, String)]) -> Result<(CoupledDataset, IngestReport)> {
    let mut report = IngestReport {
        raw_object_edges: user_object.len(),
        raw_group_edges: user_group.len(),
        ..Default::default()
    };
    let grouped: std::collections::HashSet<&str> = user_group.iter().map(|(u, _)| u.as_str()).collect();

    let mut users = Labels::new();
    let mut objects = Labels::new();
    let mut groups = Labels::new();
    let mut removed_users = std::collections::HashSet::new();
    let mut seen_removed = std::collections::HashSet::new();

    let mut object_pairs = Vec::new();
    for (u, o) in user_object {
        if grouped.contains(u.as_str()) {
            object_pairs.push((users.intern(u), objects.intern(o)));
        } else {
            removed_users.insert(u.as_str());
            if seen_removed.insert((u.as_str(), o.as_str())) {
                report.removed_object_edges += 1;
            } else {
                report.duplicate_object_edges += 1;
            }
        }
    }
    report.removed_users = removed_users.len();
    let group_pairs: Vec<(NodeId, NodeId)> = user_group.iter().map(|(u, c)| (users.intern(u), groups.intern(c))).collect();
    if users.is_empty() {
        return Err(Error::EmptyDataset);
    }

    let uo = BipartiteGraph::from_edges(users.len(), objects.len(), object_pairs.iter().copied())?;
    let ug = BipartiteGraph::from_edges(users.len(), groups.len(), group_pairs.iter().copied())?;
    report.kept_object_edges = uo.edge_count();
    report.kept_group_edges = ug.edge_count();
    report.duplicate_object_edges += object_pairs.len() - uo.edge_count();
    report.duplicate_group_edges = group_pairs.len() - ug.edge_count();
    Ok((CoupledDataset::new(uo, ug, users, objects, groups)?, report))
}

/// Dataset sizes in the usual summary-table layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DatasetStats {
    pub users: usize,
    pub objects: usize,
    pub groups: usize,
    pub user_object_pairs: usize,
    pub user_group_pairs: usize,
}

impl DatasetStats {
    pub const CSV_HEADER: &'static str = "users,objects,groups,user_object_pairs,user_group_pairs";

    pub fn of(dataset: &CoupledDataset) -> Self {
        DatasetStats {
            users: dataset.user_count(),
            objects: dataset.object_count(),
            groups: dataset.group_count(),
            user_object_pairs: dataset.user_object().edge_count(),
            user_group_pairs: dataset.user_group().edge_count(),
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.users, self.objects, self.groups, self.user_object_pairs, self.user_group_pairs
        )
    }
}

/// `(kind, degree, count)` rows for the four degree sequences of a dataset,
/// ascending by degree within each kind.
pub fn degree_histograms(dataset: &CoupledDataset) -> Vec<(&'static str, usize, usize)> {
    let seqs = [
        ("object", dataset.user_object().degrees(Side::Right)),
        ("group", dataset.user_group().degrees(Side::Right)),
        ("user_objects", dataset.user_object().degrees(Side::Left)),
        ("user_groups", dataset.user_group().degrees(Side::Left)),
    ];
    let mut rows = Vec::new();
    for (kind, degrees) in seqs {
        let mut hist: std::collections::BTreeMap<usize, usize> = Default::default();
        for d in degrees {
            *hist.entry(d).or_default() += 1;
        }
        rows.extend(hist.into_iter().map(|(d, n)| (kind, d, n)));
    }
    rows
}

/// Writes a dataset's edges back out as two edge files.
pub fn write_edge_files(dataset: &CoupledDataset, objects_path: &Path, groups_path: &Path) -> Result<()> {
    use std::io::Write;
    let write = |path: &Path, graph: &BipartiteGraph, right: &Labels| -> Result<()> {
        let mut w = std::io::BufWriter::new(File::create(path)?);
        for (l, r) in graph.edges() {
            writeln!(w, "{}\t{}", dataset.users().label(l).unwrap_or_default(), right.label(r).unwrap_or_default())?;
        }
        w.flush()?;
        Ok(())
    };
    write(objects_path, dataset.user_object(), dataset.objects())?;
    write(groups_path, dataset.user_group(), dataset.groups())
}
