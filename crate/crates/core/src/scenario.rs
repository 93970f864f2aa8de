//! Evaluable network snapshots for the paired half-duplex scheme and the
//! full-duplex baseline.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{
    sample_ppp, uniform_point_in_cell, voronoi_adjacency, Deployment, Point2D, VoronoiAdjacency,
    Window,
};
use crate::pairing::{assign_directions, pair_base_stations, Direction, PairedNetwork};

/// Resampling budget for empty Poisson draws.
const MAX_EMPTY_REDRAWS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// Two adjacent half-duplex base stations, one uplink and one downlink.
    CompFlex,
    /// Full-duplex base stations serving one uplink and one downlink mobile each.
    FullDuplex,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::CompFlex => "compflex",
            Scheme::FullDuplex => "fd",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "compflex" => Ok(Scheme::CompFlex),
            "fd" | "full_duplex" => Ok(Scheme::FullDuplex),
            other => Err(Error::Parameter(format!("unknown scheme '{other}'"))),
        }
    }
}

/// What a base station does in a snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BsRole {
    Uplink,
    Downlink,
    FullDuplex,
}

impl BsRole {
    pub fn receives_uplink(self) -> bool {
        matches!(self, BsRole::Uplink | BsRole::FullDuplex)
    }

    pub fn transmits_downlink(self) -> bool {
        matches!(self, BsRole::Downlink | BsRole::FullDuplex)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BsRole::Uplink => "ul",
            BsRole::Downlink => "dl",
            BsRole::FullDuplex => "fd",
        }
    }
}

impl From<Direction> for BsRole {
    fn from(d: Direction) -> Self {
        match d {
            Direction::Uplink => BsRole::Uplink,
            Direction::Downlink => BsRole::Downlink,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobileStation {
    pub position: Point2D,
    pub direction: Direction,
    pub serving_bs: usize,
}

/// Typical receivers/transmitters nearest the window centre.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TypicalNodes {
    pub ul_bs: usize,
    pub dl_bs: usize,
    pub ul_ms: usize,
    pub dl_ms: usize,
}

/// A complete snapshot: base stations with roles, one or two mobiles per
/// cell, the serving map and (for CoMPflex) the pairing.
#[derive(Debug, Clone)]
pub struct Scenario {
    scheme: Scheme,
    tessellation: VoronoiAdjacency,
    roles: Vec<BsRole>,
    mobiles: Vec<MobileStation>,
    ul_ms_of_bs: Vec<Option<usize>>,
    dl_ms_of_bs: Vec<Option<usize>>,
    pairing: Option<PairedNetwork>,
    typical: Option<TypicalNodes>,
}

impl Scenario {
    /// Assembles a CoMPflex snapshot from a directed pairing and one mobile
    /// position per cell (indexed by base station).
    pub fn compflex(
        tessellation: VoronoiAdjacency,
        pairing: PairedNetwork,
        ms_positions: Vec<Point2D>,
    ) -> Result<Self> {
        let n = tessellation.len();
        let directions = pairing
            .directions()
            .ok_or_else(|| Error::Contract("pairing has no directions assigned".into()))?
            .to_vec();
        if pairing.bs_count() != n || ms_positions.len() != n {
            return Err(Error::Parameter(format!(
                "expected {n} stations and mobiles, got {} and {}",
                pairing.bs_count(),
                ms_positions.len()
            )));
        }
        let mobiles: Vec<MobileStation> = ms_positions
            .into_iter()
            .enumerate()
            .map(|(bs, position)| MobileStation {
                position,
                direction: directions[bs],
                serving_bs: bs,
            })
            .collect();
        let mut ul_ms_of_bs = vec![None; n];
        let mut dl_ms_of_bs = vec![None; n];
        for (k, ms) in mobiles.iter().enumerate() {
            match ms.direction {
                Direction::Uplink => ul_ms_of_bs[ms.serving_bs] = Some(k),
                Direction::Downlink => dl_ms_of_bs[ms.serving_bs] = Some(k),
            }
        }
        let center = tessellation.window().center();
        let typical = pairing
            .typical_pair(tessellation.sites(), &center)
            .map(|(a, b)| {
                let (ul_bs, dl_bs) = if directions[a] == Direction::Uplink {
                    (a, b)
                } else {
                    (b, a)
                };
                TypicalNodes {
                    ul_bs,
                    dl_bs,
                    ul_ms: ul_bs,
                    dl_ms: dl_bs,
                }
            });
        let scenario = Self {
            scheme: Scheme::CompFlex,
            roles: directions.into_iter().map(BsRole::from).collect(),
            tessellation,
            mobiles,
            ul_ms_of_bs,
            dl_ms_of_bs,
            pairing: Some(pairing),
            typical,
        };
        scenario.check_association()?;
        Ok(scenario)
    }

    /// Assembles a full-duplex snapshot from per-cell uplink and downlink
    /// mobile positions.
    pub fn full_duplex(
        tessellation: VoronoiAdjacency,
        ul_positions: Vec<Point2D>,
        dl_positions: Vec<Point2D>,
    ) -> Result<Self> {
        let n = tessellation.len();
        if ul_positions.len() != n || dl_positions.len() != n {
            return Err(Error::Parameter(format!(
                "expected {n} uplink and downlink mobiles, got {} and {}",
                ul_positions.len(),
                dl_positions.len()
            )));
        }
        let mut mobiles = Vec::with_capacity(2 * n);
        let mut ul_ms_of_bs = vec![None; n];
        let mut dl_ms_of_bs = vec![None; n];
        for (bs, (ul, dl)) in ul_positions.into_iter().zip(dl_positions).enumerate() {
            ul_ms_of_bs[bs] = Some(mobiles.len());
            mobiles.push(MobileStation {
                position: ul,
                direction: Direction::Uplink,
                serving_bs: bs,
            });
            dl_ms_of_bs[bs] = Some(mobiles.len());
            mobiles.push(MobileStation {
                position: dl,
                direction: Direction::Downlink,
                serving_bs: bs,
            });
        }
        let center = tessellation.window().center();
        let typical = tessellation.locate(&center).map(|bs| TypicalNodes {
            ul_bs: bs,
            dl_bs: bs,
            ul_ms: ul_ms_of_bs[bs].expect("every FD cell has an uplink mobile"),
            dl_ms: dl_ms_of_bs[bs].expect("every FD cell has a downlink mobile"),
        });
        let scenario = Self {
            scheme: Scheme::FullDuplex,
            roles: vec![BsRole::FullDuplex; n],
            tessellation,
            mobiles,
            ul_ms_of_bs,
            dl_ms_of_bs,
            pairing: None,
            typical,
        };
        scenario.check_association()?;
        Ok(scenario)
    }

    fn check_association(&self) -> Result<()> {
        for (k, ms) in self.mobiles.iter().enumerate() {
            if !self.tessellation.cell_contains(ms.serving_bs, &ms.position) {
                return Err(Error::Contract(format!(
                    "mobile {k} at ({}, {}) is outside the cell of its serving station {}",
                    ms.position.x, ms.position.y, ms.serving_bs
                )));
            }
        }
        Ok(())
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn tessellation(&self) -> &VoronoiAdjacency {
        &self.tessellation
    }

    pub fn window(&self) -> Window {
        self.tessellation.window()
    }

    pub fn bs_positions(&self) -> &[Point2D] {
        self.tessellation.sites()
    }

    pub fn bs_count(&self) -> usize {
        self.roles.len()
    }

    pub fn roles(&self) -> &[BsRole] {
        &self.roles
    }

    pub fn role(&self, bs: usize) -> BsRole {
        self.roles[bs]
    }

    pub fn mobiles(&self) -> &[MobileStation] {
        &self.mobiles
    }

    pub fn uplink_mobile_of(&self, bs: usize) -> Option<usize> {
        self.ul_ms_of_bs[bs]
    }

    pub fn downlink_mobile_of(&self, bs: usize) -> Option<usize> {
        self.dl_ms_of_bs[bs]
    }

    pub fn pairing(&self) -> Option<&PairedNetwork> {
        self.pairing.as_ref()
    }

    /// CoMPflex partner of `bs`, if paired.
    pub fn partner(&self, bs: usize) -> Option<usize> {
        self.pairing.as_ref().and_then(|p| p.partner(bs))
    }

    pub fn typical(&self) -> Option<TypicalNodes> {
        self.typical
    }

    /// The uplink mobile whose transmission is structurally closest to the
    /// downlink mobile `ms`: same cell for FD, the partner cell for CoMPflex.
    pub fn intra_cell_interferer(&self, ms: usize) -> Option<usize> {
        let m = self.mobiles.get(ms)?;
        if m.direction != Direction::Downlink {
            return None;
        }
        match self.scheme {
            Scheme::FullDuplex => self.ul_ms_of_bs[m.serving_bs],
            Scheme::CompFlex => self.partner(m.serving_bs).and_then(|p| self.ul_ms_of_bs[p]),
        }
    }
}

fn sample_nonempty<R: Rng + ?Sized>(
    lambda: f64,
    window: Window,
    rng: &mut R,
) -> Result<Deployment> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::Parameter(format!(
            "base-station density must be positive, got {lambda}"
        )));
    }
    for _ in 0..MAX_EMPTY_REDRAWS {
        let d = sample_ppp(lambda, window, rng)?;
        if !d.is_empty() {
            return Ok(d);
        }
    }
    Err(Error::Parameter(format!(
        "density {lambda} in a {} km window never produced a base station",
        window.side()
    )))
}

/// Samples a CoMPflex snapshot: PPP sites, tessellation, pairing, directions
/// and one uniformly placed mobile per cell.
pub fn build_compflex_scenario<R: Rng + ?Sized>(
    lambda_c: f64,
    window: Window,
    rng: &mut R,
) -> Result<Scenario> {
    let deployment = sample_nonempty(lambda_c, window, rng)?;
    let tessellation = voronoi_adjacency(&deployment)?;
    let pairing = assign_directions(pair_base_stations(&tessellation, rng), rng)?;
    let ms = (0..tessellation.len())
        .map(|i| uniform_point_in_cell(&tessellation, i, rng))
        .collect::<Result<Vec<_>>>()?;
    Scenario::compflex(tessellation, pairing, ms)
}

/// Samples a full-duplex snapshot: PPP sites and two independent uniform
/// mobiles per cell, one uplink and one downlink.
pub fn build_fd_scenario<R: Rng + ?Sized>(
    lambda_f: f64,
    window: Window,
    rng: &mut R,
) -> Result<Scenario> {
    let deployment = sample_nonempty(lambda_f, window, rng)?;
    let tessellation = voronoi_adjacency(&deployment)?;
    let n = tessellation.len();
    let mut ul = Vec::with_capacity(n);
    let mut dl = Vec::with_capacity(n);
    for i in 0..n {
        ul.push(uniform_point_in_cell(&tessellation, i, rng)?);
        dl.push(uniform_point_in_cell(&tessellation, i, rng)?);
    }
    Scenario::full_duplex(tessellation, ul, dl)
}

/// Builds a snapshot of either scheme at base-station density `lambda`.
pub fn build_scenario<R: Rng + ?Sized>(
    scheme: Scheme,
    lambda: f64,
    window: Window,
    rng: &mut R,
) -> Result<Scenario> {
    match scheme {
        Scheme::CompFlex => build_compflex_scenario(lambda, window, rng),
        Scheme::FullDuplex => build_fd_scenario(lambda, window, rng),
    }
}
