//! Small hand-built instances used by tests, docs and the CLI examples.

use alloc::vec;
use alloc::vec::Vec;

use crate::instance::{
    AgentSpec, CompatibilityGraph, EdgeSpec, MultiRoundSolution, ResourceSpec, RestrictionsGraph,
};
use crate::rational::int;

/// Three agents, two unit resources, three rounds; `x1` wants one round and
/// `x2`, `x3` want two.
pub fn three_agent_example() -> CompatibilityGraph {
    CompatibilityGraph::new(
        3,
        vec![
            AgentSpec::new("x1", 1, [1, 2, 3]),
            AgentSpec::new("x2", 2, [1, 2, 3]),
            AgentSpec::new("x3", 2, [1, 2, 3]),
        ],
        vec![ResourceSpec::unit("y1"), ResourceSpec::unit("y2")],
        vec![
            ("x1".into(), "y1".into()),
            ("x2".into(), "y1".into()),
            ("x2".into(), "y2".into()),
            ("x3".into(), "y2".into()),
        ],
    )
    .expect("fixture is well formed")
}

/// Rounds {x1y1, x2y2}, {x2y1, x3y2}, {x3y2} on [`three_agent_example`].
pub fn three_agent_solution() -> MultiRoundSolution {
    let g = three_agent_example();
    let (x1, x2, x3) = (0, 1, 2);
    let (y1, y2) = (0, 1);
    let rounds: Vec<Vec<(usize, usize)>> = vec![
        vec![(x1, y1), (x2, y2)],
        vec![(x2, y1), (x3, y2)],
        vec![(x3, y2)],
    ];
    MultiRoundSolution::from_indexed(&g, &rounds)
}

/// Four lab members over two days and two offices. Without relaxations only
/// three of them can be seated; `x1` dropping its `big_1` restriction on the
/// small office `y2` seats everyone.
pub fn lab_example() -> RestrictionsGraph {
    RestrictionsGraph::new(
        2,
        vec![
            AgentSpec::new("x1", 1, [1, 2])
                .with_budget(int(1))
                .with_label("big_1", int(1)),
            AgentSpec::new("x2", 1, [1, 2])
                .with_budget(int(1))
                .with_label("quiet_2", int(1)),
            AgentSpec::new("x3", 1, [1])
                .with_budget(int(2))
                .with_label("window_3", int(3)),
            AgentSpec::new("x4", 1, [2]),
        ],
        vec![ResourceSpec::unit("y1"), ResourceSpec::unit("y2")],
        vec![
            EdgeSpec::free("x1", "y1"),
            EdgeSpec::new("x1", "y2", ["big_1"]),
            EdgeSpec::free("x2", "y1"),
            EdgeSpec::new("x2", "y2", ["quiet_2"]),
            EdgeSpec::free("x3", "y1"),
            EdgeSpec::new("x3", "y2", ["window_3"]),
            EdgeSpec::free("x4", "y2"),
        ],
    )
    .expect("fixture is well formed")
}
