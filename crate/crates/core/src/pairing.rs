//! Randomised greedy pairing of Voronoi-adjacent base stations into
//! uplink/downlink pairs.

use std::fmt;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{Point2D, VoronoiAdjacency};

/// Traffic direction served by a half-duplex node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Uplink,
    Downlink,
}

impl Direction {
    pub fn opposite(self) -> Self {
        match self {
            Direction::Uplink => Direction::Downlink,
            Direction::Downlink => Direction::Uplink,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Uplink => "ul",
            Direction::Downlink => "dl",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Result of pairing: disjoint adjacent pairs, the leftover base stations and,
/// once assigned, a direction per base station.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedNetwork {
    pairs: Vec<(usize, usize)>,
    unpaired: Vec<usize>,
    partner: Vec<Option<usize>>,
    directions: Option<Vec<Direction>>,
}

impl PairedNetwork {
    /// Builds a network from an explicit pairing over `bs_count` stations.
    /// Only the matching structure is checked here; use [`validate`](Self::validate)
    /// for adjacency and maximality.
    pub fn from_pairs(bs_count: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut partner = vec![None; bs_count];
        for &(a, b) in &pairs {
            if a >= bs_count || b >= bs_count || a == b {
                return Err(Error::Parameter(format!("invalid pair ({a}, {b})")));
            }
            if partner[a].is_some() || partner[b].is_some() {
                return Err(Error::Parameter(format!(
                    "base station in pair ({a}, {b}) is already paired"
                )));
            }
            partner[a] = Some(b);
            partner[b] = Some(a);
        }
        let unpaired = (0..bs_count).filter(|&i| partner[i].is_none()).collect();
        Ok(Self {
            pairs,
            unpaired,
            partner,
            directions: None,
        })
    }

    /// Attaches explicit directions, checking that partners are opposite.
    pub fn with_directions(mut self, directions: Vec<Direction>) -> Result<Self> {
        if self.directions.is_some() {
            return Err(Error::Contract("directions already assigned".into()));
        }
        if directions.len() != self.partner.len() {
            return Err(Error::Parameter(format!(
                "expected {} directions, got {}",
                self.partner.len(),
                directions.len()
            )));
        }
        if let Some(&(a, b)) = self
            .pairs
            .iter()
            .find(|&&(a, b)| directions[a] == directions[b])
        {
            return Err(Error::Parameter(format!(
                "pair ({a}, {b}) must have opposite directions"
            )));
        }
        self.directions = Some(directions);
        Ok(self)
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn unpaired(&self) -> &[usize] {
        &self.unpaired
    }

    pub fn bs_count(&self) -> usize {
        self.partner.len()
    }

    pub fn partner(&self, bs: usize) -> Option<usize> {
        self.partner[bs]
    }

    pub fn has_directions(&self) -> bool {
        self.directions.is_some()
    }

    pub fn directions(&self) -> Option<&[Direction]> {
        self.directions.as_deref()
    }

    pub fn direction(&self, bs: usize) -> Option<Direction> {
        self.directions.as_ref().map(|d| d[bs])
    }

    pub fn count(&self, direction: Direction) -> usize {
        self.directions
            .as_ref()
            .map_or(0, |d| d.iter().filter(|&&x| x == direction).count())
    }

    pub fn unpaired_fraction(&self) -> f64 {
        if self.partner.is_empty() {
            0.0
        } else {
            self.unpaired.len() as f64 / self.partner.len() as f64
        }
    }

    /// Pair whose midpoint is nearest to `center`.
    pub fn typical_pair(&self, sites: &[Point2D], center: &Point2D) -> Option<(usize, usize)> {
        self.pairs
            .iter()
            .copied()
            .map(|(a, b)| ((a, b), sites[a].midpoint(&sites[b]).distance_sq(center)))
            .fold(
                None,
                |best: Option<((usize, usize), f64)>, (p, d)| match best {
                    Some((_, bd)) if bd <= d => best,
                    _ => Some((p, d)),
                },
            )
            .map(|(p, _)| p)
    }

    /// Checks every structural invariant against the adjacency it was built on:
    /// disjoint cover, adjacency of pairs, maximality, opposite directions.
    pub fn validate(&self, adjacency: &VoronoiAdjacency) -> Result<()> {
        let n = adjacency.len();
        if self.partner.len() != n {
            return Err(Error::Contract(format!(
                "network covers {} stations, adjacency has {n}",
                self.partner.len()
            )));
        }
        let mut seen = vec![0u8; n];
        for &(a, b) in &self.pairs {
            seen[a] += 1;
            seen[b] += 1;
            if !adjacency.are_adjacent(a, b) {
                return Err(Error::Contract(format!("pair ({a}, {b}) is not adjacent")));
            }
        }
        for &u in &self.unpaired {
            seen[u] += 1;
        }
        if let Some(i) = seen.iter().position(|&c| c != 1) {
            return Err(Error::Contract(format!(
                "base station {i} covered {} times",
                seen[i]
            )));
        }
        for &u in &self.unpaired {
            if let Some(&v) = adjacency
                .neighbors(u)
                .iter()
                .find(|&&v| self.partner[v].is_none())
            {
                return Err(Error::Contract(format!(
                    "unpaired stations {u} and {v} are adjacent"
                )));
            }
        }
        if let Some(d) = &self.directions {
            if let Some(&(a, b)) = self.pairs.iter().find(|&&(a, b)| d[a] == d[b]) {
                return Err(Error::Contract(format!(
                    "pair ({a}, {b}) shares direction {}",
                    d[a]
                )));
            }
        }
        Ok(())
    }
}

/// Greedy randomised pairing: stations are visited in a uniformly random
/// order; each still-unpaired station with at least one unpaired neighbour is
/// paired with one of those neighbours chosen uniformly. The result is a
/// maximal matching of the adjacency graph.
pub fn pair_base_stations<R: Rng + ?Sized>(
    adjacency: &VoronoiAdjacency,
    rng: &mut R,
) -> PairedNetwork {
    let n = adjacency.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut partner: Vec<Option<usize>> = vec![None; n];
    let mut pairs = Vec::with_capacity(n / 2);
    let mut free = Vec::new();
    for &bs in &order {
        if partner[bs].is_some() {
            continue;
        }
        free.clear();
        free.extend(
            adjacency
                .neighbors(bs)
                .iter()
                .copied()
                .filter(|&j| partner[j].is_none()),
        );
        if let Some(&mate) = free.choose(rng) {
            partner[bs] = Some(mate);
            partner[mate] = Some(bs);
            pairs.push((bs, mate));
        }
    }
    let unpaired = (0..n).filter(|&i| partner[i].is_none()).collect();
    PairedNetwork {
        pairs,
        unpaired,
        partner,
        directions: None,
    }
}

/// Assigns uplink/downlink: a fair coin per pair decides which member is
/// uplink, and each unpaired station flips its own fair coin.
pub fn assign_directions<R: Rng + ?Sized>(
    mut network: PairedNetwork,
    rng: &mut R,
) -> Result<PairedNetwork> {
    if network.directions.is_some() {
        return Err(Error::Contract("directions already assigned".into()));
    }
    let mut directions = vec![Direction::Uplink; network.partner.len()];
    for &(a, b) in &network.pairs {
        let first = coin(rng);
        directions[a] = first;
        directions[b] = first.opposite();
    }
    for &u in &network.unpaired {
        directions[u] = coin(rng);
    }
    network.directions = Some(directions);
    Ok(network)
}

fn coin<R: Rng + ?Sized>(rng: &mut R) -> Direction {
    if rng.random_bool(0.5) {
        Direction::Uplink
    } else {
        Direction::Downlink
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{sample_ppp, voronoi_adjacency, Deployment, Window};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn row(xs: &[f64]) -> VoronoiAdjacency {
        let pts = xs.iter().map(|&x| Point2D::new(x, 0.0)).collect();
        let d = Deployment::new(pts, 0.0, Window::new(20.0).unwrap()).unwrap();
        voronoi_adjacency(&d).unwrap()
    }

    #[test]
    fn two_adjacent_stations_form_one_pair() {
        let adj = row(&[-1.0, 1.0]);
        let net = pair_base_stations(&adj, &mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!(net.pairs().len(), 1);
        assert!(net.unpaired().is_empty());
        net.validate(&adj).unwrap();
    }

    #[test]
    fn path_of_three_leaves_an_end_unpaired() {
        let adj = row(&[-4.0, 0.0, 4.0]);
        assert_eq!(adj.neighbors(1), &[0, 2]);
        assert_eq!(adj.neighbors(0), &[1]);
        let mut outcomes = std::collections::BTreeSet::new();
        for seed in 0..200 {
            let net = pair_base_stations(&adj, &mut ChaCha8Rng::seed_from_u64(seed));
            net.validate(&adj).unwrap();
            assert_eq!(net.pairs().len(), 1);
            assert_eq!(net.unpaired().len(), 1);
            outcomes.insert(net.unpaired()[0]);
        }
        // Middle station is never left over; both ends are.
        assert_eq!(outcomes.into_iter().collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn empty_graph_gives_empty_pairing() {
        let adj = row(&[0.0]);
        let net = pair_base_stations(&adj, &mut ChaCha8Rng::seed_from_u64(0));
        assert!(net.pairs().is_empty());
        assert_eq!(net.unpaired(), &[0]);
    }

    #[test]
    fn directions_cannot_be_assigned_twice() {
        let adj = row(&[-1.0, 1.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let net = assign_directions(pair_base_stations(&adj, &mut rng), &mut rng).unwrap();
        assert!(matches!(
            assign_directions(net, &mut rng),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn single_pair_orientation_is_a_fair_coin() {
        let net = PairedNetwork::from_pairs(2, vec![(0, 1)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let trials = 10_000;
        let first_up = (0..trials)
            .filter(|_| {
                let d = assign_directions(net.clone(), &mut rng).unwrap();
                assert_ne!(d.direction(0), d.direction(1));
                d.direction(0) == Some(Direction::Uplink)
            })
            .count();
        let p = first_up as f64 / trials as f64;
        let sigma = (0.25 / trials as f64).sqrt();
        assert!((p - 0.5).abs() < 3.0 * sigma, "p = {p}");
    }

    #[test]
    fn direction_counts_partition_stations() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d = sample_ppp(0.02, Window::new(100.0).unwrap(), &mut rng).unwrap();
        let adj = voronoi_adjacency(&d).unwrap();
        let net = assign_directions(pair_base_stations(&adj, &mut rng), &mut rng).unwrap();
        assert_eq!(
            net.count(Direction::Uplink) + net.count(Direction::Downlink),
            d.len()
        );
        net.validate(&adj).unwrap();
    }

    #[test]
    fn same_seed_same_pairing() {
        let d = sample_ppp(
            0.02,
            Window::new(100.0).unwrap(),
            &mut ChaCha8Rng::seed_from_u64(4),
        )
        .unwrap();
        let adj = voronoi_adjacency(&d).unwrap();
        let a = pair_base_stations(&adj, &mut ChaCha8Rng::seed_from_u64(10));
        let b = pair_base_stations(&adj, &mut ChaCha8Rng::seed_from_u64(10));
        assert_eq!(a, b);
    }

    #[test]
    fn from_pairs_rejects_overlap() {
        assert!(PairedNetwork::from_pairs(3, vec![(0, 1), (1, 2)]).is_err());
        assert!(PairedNetwork::from_pairs(3, vec![(0, 0)]).is_err());
        let net = PairedNetwork::from_pairs(2, vec![(0, 1)]).unwrap();
        assert!(net
            .with_directions(vec![Direction::Uplink, Direction::Uplink])
            .is_err());
    }

    #[test]
    fn typical_pair_is_nearest_to_center() {
        let sites = [
            Point2D::new(-9.0, 0.0),
            Point2D::new(-7.0, 0.0),
            Point2D::new(0.5, 0.0),
            Point2D::new(1.5, 0.0),
        ];
        let net = PairedNetwork::from_pairs(4, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(net.typical_pair(&sites, &Point2D::ORIGIN), Some((2, 3)));
    }
}
