use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relation::{FiniteRelation, Relation, VertexSet};

/// The infinite walk `preperiod, cycle, cycle, …`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventuallyPeriodicWalk {
    pub preperiod: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl EventuallyPeriodicWalk {
    pub fn new(preperiod: Vec<usize>, cycle: Vec<usize>) -> Self {
        EventuallyPeriodicWalk { preperiod, cycle }
    }

    fn check(&self, g: &FiniteRelation) -> Result<()> {
        if self.cycle.is_empty() {
            return Err(Error::InconsistentWalk("empty cycle".into()));
        }
        let seq: Vec<usize> = self
            .preperiod
            .iter()
            .chain(&self.cycle)
            .chain(std::iter::once(&self.cycle[0]))
            .copied()
            .collect();
        for w in seq.windows(2) {
            if !g.contains(w[0], w[1])? {
                return Err(Error::InconsistentWalk(format!(
                    "({}, {}) is not an edge",
                    w[0], w[1]
                )));
            }
        }
        Ok(())
    }
}

/// Points visited infinitely often by a walk of `g`.
pub fn omega_set(g: &FiniteRelation, walk: &EventuallyPeriodicWalk) -> Result<VertexSet> {
    walk.check(g)?;
    Ok(walk.cycle.iter().copied().collect())
}

/// Points visited infinitely often by a backward walk, i.e. a walk of `g⁻¹`.
pub fn alpha_set(g: &FiniteRelation, walk: &EventuallyPeriodicWalk) -> Result<VertexSet> {
    omega_set(&g.inverse(), walk)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_is_the_periodic_part() {
        let g = FiniteRelation::new(3, [(0, 1), (1, 2), (2, 1)]).unwrap();
        let w = EventuallyPeriodicWalk::new(vec![0], vec![1, 2]);
        assert_eq!(omega_set(&g, &w).unwrap(), [1, 2].into_iter().collect());
        assert!(alpha_set(&g, &w).is_err());
        let back = EventuallyPeriodicWalk::new(vec![], vec![2, 1]);
        assert_eq!(alpha_set(&g, &back).unwrap(), [1, 2].into_iter().collect());
    }

    #[test]
    fn loop_and_star_centre() {
        let g = FiniteRelation::new(1, [(0, 0)]).unwrap();
        let w = EventuallyPeriodicWalk::new(vec![], vec![0]);
        assert_eq!(omega_set(&g, &w).unwrap(), VertexSet::singleton(0));

        let star = FiniteRelation::new(3, (0..3).flat_map(|x| [(x, 1), (1, x)])).unwrap();
        let centre = EventuallyPeriodicWalk::new(vec![], vec![1]);
        let om = omega_set(&star, &centre).unwrap();
        assert_eq!(om, VertexSet::singleton(1));
        assert_ne!(om, VertexSet::full(3));
        let tail = EventuallyPeriodicWalk::new(vec![0], vec![1]);
        assert_eq!(alpha_set(&star, &tail).unwrap(), VertexSet::singleton(1));
    }

    #[test]
    fn inconsistent_walks_are_rejected() {
        let g = FiniteRelation::new(2, [(0, 1)]).unwrap();
        assert!(omega_set(&g, &EventuallyPeriodicWalk::new(vec![0], vec![1])).is_err());
        assert!(omega_set(&g, &EventuallyPeriodicWalk::new(vec![0], vec![])).is_err());
    }
}
