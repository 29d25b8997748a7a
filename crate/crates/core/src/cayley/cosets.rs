use std::collections::BTreeMap;

use super::ball::CayleyBall;
use super::group::GroupElement;
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, VertexId};

/// The part of a left coset `g H_i` lying in a Cayley ball, with the edges
/// labelled by generators of the factor.
#[derive(Clone, Debug)]
pub struct CosetSubgraph {
    /// `None` when the whole group is used as its own parabolic.
    pub factor: Option<usize>,
    /// Shortest element of the coset.
    pub representative: GroupElement,
    /// Ball vertex ids, ascending. Local vertex `i` of `graph` is `members[i]`.
    pub members: Vec<VertexId>,
    pub graph: Graph,
}

/// All cosets of factor `factor` meeting the ball, ordered by their
/// representative's vertex id.
pub fn coset_family(ball: &CayleyBall, factor: usize) -> Result<Vec<CosetSubgraph>> {
    let group = ball.group();
    if !group.is_free_product() {
        return Err(Error::input(format!(
            "coset families need a free product, got {}",
            ball.spec()
        )));
    }
    if factor >= group.factors().len() {
        return Err(Error::input(format!(
            "factor index {factor} out of range (group has {} factors)",
            group.factors().len()
        )));
    }
    let mut by_rep: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for v in ball.graph().vertices() {
        let rep = ball.element(v).coset_representative(factor);
        let rv = ball
            .vertex_of(&rep)
            .expect("a coset representative is a prefix, hence in the ball");
        by_rep.entry(rv).or_default().push(v);
    }
    let gens: Vec<&GroupElement> = group.factor_generators(factor).map(|s| &s.element).collect();
    let mut out = Vec::with_capacity(by_rep.len());
    for (rv, members) in by_rep {
        let mut b = GraphBuilder::new(members.len());
        for (i, &v) in members.iter().enumerate() {
            b.set_label(i as VertexId, ball.graph().label(v).unwrap_or_default());
            for s in &gens {
                let w = group.mul(ball.element(v), s);
                if let Some(wv) = ball.vertex_of(&w) {
                    let j = members.binary_search(&wv).expect("s in S_i keeps the coset") as VertexId;
                    if (i as VertexId) < j {
                        b.add_edge(i as VertexId, j)?;
                    }
                }
            }
        }
        out.push(CosetSubgraph {
            factor: Some(factor),
            representative: ball.element(rv).clone(),
            members,
            graph: b.build(),
        });
    }
    Ok(out)
}

/// Cosets of every factor, factor by factor.
pub fn all_coset_families(ball: &CayleyBall) -> Result<Vec<CosetSubgraph>> {
    let mut out = Vec::new();
    for i in 0..ball.group().factors().len() {
        out.extend(coset_family(ball, i)?);
    }
    Ok(out)
}

/// The whole ball as a single parabolic (the group is hyperbolic relative to
/// itself).
pub fn whole_group_family(ball: &CayleyBall) -> Vec<CosetSubgraph> {
    vec![CosetSubgraph {
        factor: None,
        representative: GroupElement::identity(),
        members: ball.graph().vertices().collect(),
        graph: ball.graph().clone(),
    }]
}
