use alloc::vec;
use alloc::vec::Vec;

use super::{Component, Instance, Resources, Solution};

/// Reference-counted record of which component classes run on which CN.
///
/// A class consumes its demand and variable cost on a CN once, however many
/// E2 nodes it serves; the demand is released when the last user leaves.
#[derive(Clone, Debug)]
pub struct Occupancy {
    slots: usize,
    refs: Vec<u32>,
    active_classes: Vec<u32>,
    usage: Vec<Resources>,
}

impl Occupancy {
    pub fn new(instance: &Instance) -> Self {
        let slots = instance.n_slots();
        let n = instance.n_cn();
        Self { slots, refs: vec![0; n * slots], active_classes: vec![0; n], usage: vec![Resources::ZERO; n] }
    }

    pub fn from_solution(instance: &Instance, solution: &Solution) -> Self {
        let mut occ = Self::new(instance);
        for e2 in 0..solution.n_e2() {
            for (slot, host) in solution.slots(e2).iter().enumerate() {
                if let Some(m) = *host {
                    occ.add(instance, m, Component::from_slot(slot));
                }
            }
        }
        occ
    }

    #[inline]
    pub fn is_active(&self, cn: usize, component: Component) -> bool {
        self.refs[cn * self.slots + component.slot()] > 0
    }

    #[inline]
    pub fn is_used(&self, cn: usize) -> bool {
        self.active_classes[cn] > 0
    }

    pub fn usage(&self, cn: usize) -> Resources {
        self.usage[cn]
    }

    /// Whether one more placement of `component` on `cn` respects capacity.
    pub fn fits(&self, instance: &Instance, cn: usize, component: Component) -> bool {
        self.is_active(cn, component) || instance.compute_nodes[cn].admits(self.usage[cn] + instance.demand(component))
    }

    /// Cost increase caused by placing one more `component` on `cn`.
    pub fn marginal_cost(&self, instance: &Instance, cn: usize, component: Component) -> f64 {
        if self.is_active(cn, component) {
            return 0.0;
        }
        let node = &instance.compute_nodes[cn];
        let fixed = if self.is_used(cn) { 0.0 } else { node.fixed_cost };
        fixed + node.var_cost(component)
    }

    /// Records a placement; returns the cost increase.
    pub fn add(&mut self, instance: &Instance, cn: usize, component: Component) -> f64 {
        let delta = self.marginal_cost(instance, cn, component);
        let idx = cn * self.slots + component.slot();
        self.refs[idx] += 1;
        if self.refs[idx] == 1 {
            self.active_classes[cn] += 1;
            self.recompute_usage(instance, cn);
        }
        delta
    }

    /// Drops a placement; returns the cost decrease.
    pub fn remove(&mut self, instance: &Instance, cn: usize, component: Component) -> f64 {
        let idx = cn * self.slots + component.slot();
        debug_assert!(self.refs[idx] > 0, "removing {component} from CN {cn} that does not run it");
        self.refs[idx] -= 1;
        if self.refs[idx] > 0 {
            return 0.0;
        }
        self.active_classes[cn] -= 1;
        self.recompute_usage(instance, cn);
        let node = &instance.compute_nodes[cn];
        let fixed = if self.is_used(cn) { 0.0 } else { node.fixed_cost };
        fixed + node.var_cost(component)
    }

    // Summed in slot order so the same class set always yields the same bits.
    fn recompute_usage(&mut self, instance: &Instance, cn: usize) {
        let mut total = Resources::ZERO;
        for slot in 0..self.slots {
            if self.refs[cn * self.slots + slot] > 0 {
                total += instance.demand(Component::from_slot(slot));
            }
        }
        self.usage[cn] = total;
    }
}
