#![allow(dead_code)]

pub mod oracles;

use std::ffi::OsStr;
use std::path::{Path, PathBuf};
use std::process::Command;

use groupdiff::{BipartiteGraph, CoupledDataset, NodeId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Each possible edge present independently with probability `density`.
pub fn random_graph<R: Rng>(rng: &mut R, left: usize, right: usize, density: f64) -> BipartiteGraph {
    let mut edges = Vec::new();
    for l in 0..left {
        for r in 0..right {
            if rng.random::<f64>() < density {
                edges.push((NodeId::from(l), NodeId::from(r)));
            }
        }
    }
    BipartiteGraph::from_edges(left, right, edges).unwrap()
}

/// Coupled graph on which every user joined at least one group.
pub fn random_coupled<R: Rng>(rng: &mut R, users: usize, objects: usize, groups: usize, density: f64, group_density: f64) -> CoupledDataset {
    let uo = random_graph(rng, users, objects, density);
    let mut edges: Vec<(NodeId, NodeId)> = random_graph(rng, users, groups, group_density).edges().collect();
    for u in 0..users {
        edges.push((NodeId::from(u), NodeId::from(rng.random_range(0..groups))));
    }
    let ug = BipartiteGraph::from_edges(users, groups, edges).unwrap();
    CoupledDataset::unlabeled(uo, ug).unwrap()
}

/// Dense 0/1 matrix of a graph, rows = left nodes.
pub fn dense(g: &BipartiteGraph) -> Vec<Vec<f64>> {
    let mut a = vec![vec![0.0; g.right_count()]; g.left_count()];
    for (l, r) in g.edges() {
        a[l.index()][r.index()] = 1.0;
    }
    a
}

pub const TOY_OBJECTS: &str = "# user\tobject\nu1\to1\nu1\to2\nu2\to1\nu2\to3\nu3\to2\nu3\to3\nu3\to4\n";
pub const TOY_GROUPS: &str = "u1\tc1\nu2\tc1\nu2\tc2\nu3\tc2\n";

/// Writes the three-user toy dataset into `dir`, returning (objects, groups) paths.
pub fn write_toy(dir: &Path) -> (PathBuf, PathBuf) {
    let objects = dir.join("objects.tsv");
    let groups = dir.join("groups.tsv");
    std::fs::write(&objects, TOY_OBJECTS).unwrap();
    std::fs::write(&groups, TOY_GROUPS).unwrap();
    (objects, groups)
}

/// Runs the CLI binary and returns (exit code, stdout, stderr).
pub fn cli<I, S>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = S>,
    S: AsRef<OsStr>,
{
    let out = Command::new(env!("CARGO_BIN_EXE_groupdiff")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}
