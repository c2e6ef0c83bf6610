use crate::auxgraph::AuxiliaryGraph;
use crate::model::LinkId;

/// Which pheromone table an ant reads: the distance/slot-index seeded initial values
/// (exploration) or the fitness-reinforced ones (exploitation).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PheromoneView {
    Initial,
    Updated,
}

/// Pheromone on base edges (indexed by [`LinkId`]) and on aux links (indexed like
/// [`AuxiliaryGraph::links`]). The initial tables are never written after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct PheromoneStore {
    edge_tau: Vec<f64>,
    aux_tau: Vec<f64>,
    edge_utau: Vec<f64>,
    aux_utau: Vec<f64>,
}

/// Seeds edge pheromone with `1 / distance` and aux-link pheromone with `1 / (level + start)`.
pub fn init_pheromones(aux: &AuxiliaryGraph) -> PheromoneStore {
    let edge_tau: Vec<f64> = aux.topology().links().iter().map(|l| 1.0 / l.distance_km).collect();
    let aux_tau: Vec<f64> = aux
        .links()
        .iter()
        .map(|a| 1.0 / (f64::from(a.level) + a.start as f64))
        .collect();
    PheromoneStore {
        edge_utau: edge_tau.clone(),
        aux_utau: aux_tau.clone(),
        edge_tau,
        aux_tau,
    }
}

impl PheromoneStore {
    pub fn edge(&self, link: LinkId, view: PheromoneView) -> f64 {
        match view {
            PheromoneView::Initial => self.edge_tau[link.0],
            PheromoneView::Updated => self.edge_utau[link.0],
        }
    }

    pub fn aux(&self, index: usize, view: PheromoneView) -> f64 {
        match view {
            PheromoneView::Initial => self.aux_tau[index],
            PheromoneView::Updated => self.aux_utau[index],
        }
    }

    pub fn aux_table(&self, view: PheromoneView) -> &[f64] {
        match view {
            PheromoneView::Initial => &self.aux_tau,
            PheromoneView::Updated => &self.aux_utau,
        }
    }

    pub fn edge_table(&self, view: PheromoneView) -> &[f64] {
        match view {
            PheromoneView::Initial => &self.edge_tau,
            PheromoneView::Updated => &self.edge_utau,
        }
    }

    pub(crate) fn deposit_edge(&mut self, link: LinkId, amount: f64) {
        self.edge_utau[link.0] += amount;
    }

    pub(crate) fn deposit_aux(&mut self, index: usize, amount: f64) {
        self.aux_utau[index] += amount;
    }

    pub(crate) fn evaporate(&mut self, sigma: f64) {
        let keep = 1.0 - sigma;
        self.edge_utau.iter_mut().chain(self.aux_utau.iter_mut()).for_each(|t| *t *= keep);
    }
}
