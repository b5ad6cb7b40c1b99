//! Spatial block decomposition and one-cell halo exchange over channels.
//!
//! Worker `w` owns block (bi, bj) with `w = bj·cols + bi`. Each worker holds one receiver per
//! face; the neighbour across that face owns the matching sender. An exchange first sends the
//! owned boundary layer on every requested face, then receives every requested halo, so with
//! unbounded channels it cannot deadlock. Faces without a neighbour are physical and filled by
//! the boundary module; a periodic axis covered by a single block wraps locally.

use std::sync::mpsc::{channel, Receiver, Sender};

use crate::boundary::{face_cells, Bc2D, BcKind, Face};
use crate::error::{Error, Result};
use crate::gas_state::Macro2D;
use crate::macro2d::HeatTensor2D;
use crate::micro2d::{Grid2D, MicroField2D};

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub id: usize,
    pub bi: usize,
    pub bj: usize,
    /// Global index offsets: local cell (i, j) is global (i0 + i, j0 + j).
    pub i0: usize,
    pub j0: usize,
    pub nx: usize,
    pub ny: usize,
    /// Left, right, bottom, top.
    pub neighbors: [Option<usize>; 4],
}

impl Block {
    pub fn neighbor(&self, f: Face) -> Option<usize> {
        self.neighbors[f.index()]
    }

    /// Faces on the physical boundary (no neighbouring worker).
    pub fn physical_faces(&self) -> Vec<Face> {
        Face::ALL
            .into_iter()
            .filter(|f| self.neighbor(*f).is_none())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HaloPlan {
    /// Blocks along y.
    pub rows: usize,
    /// Blocks along x.
    pub cols: usize,
    pub blocks: Vec<Block>,
}

impl HaloPlan {
    pub fn new(nx: usize, ny: usize, (rows, cols): (usize, usize), bc: &Bc2D) -> Result<Self> {
        if rows == 0 || cols == 0 || nx % cols != 0 || ny % rows != 0 {
            return Err(Error::config(
                "workers",
                format!("{rows}x{cols} does not divide the {nx}x{ny} grid"),
            ));
        }
        let (bnx, bny) = (nx / cols, ny / rows);
        let px = bc.face(Face::Left) == BcKind::Periodic;
        let py = bc.face(Face::Bottom) == BcKind::Periodic;
        let id = |bi: usize, bj: usize| bj * cols + bi;
        let mut blocks = Vec::with_capacity(rows * cols);
        for bj in 0..rows {
            for bi in 0..cols {
                let step = |k: usize, n: usize, up: bool, periodic: bool| -> Option<usize> {
                    match (up, k) {
                        (false, 0) => (periodic && n > 1).then(|| n - 1),
                        (false, k) => Some(k - 1),
                        (true, k) if k + 1 == n => (periodic && n > 1).then_some(0),
                        (true, k) => Some(k + 1),
                    }
                };
                let neighbors = [
                    step(bi, cols, false, px).map(|b| id(b, bj)),
                    step(bi, cols, true, px).map(|b| id(b, bj)),
                    step(bj, rows, false, py).map(|b| id(bi, b)),
                    step(bj, rows, true, py).map(|b| id(bi, b)),
                ];
                blocks.push(Block {
                    id: id(bi, bj),
                    bi,
                    bj,
                    i0: bi * bnx,
                    j0: bj * bny,
                    nx: bnx,
                    ny: bny,
                    neighbors,
                });
            }
        }
        Ok(HaloPlan { rows, cols, blocks })
    }

    pub fn n_workers(&self) -> usize {
        self.blocks.len()
    }
}

/// A field whose per-cell data can be shipped across a face.
pub trait HaloField {
    /// Owned boundary layer along `face`, in increasing index order.
    fn pack(&self, grid: &Grid2D, face: Face) -> Vec<f64>;
    /// Write a neighbour's boundary layer into the halo along `face`.
    fn unpack(&mut self, grid: &Grid2D, face: Face, data: &[f64]);
}

impl HaloField for [Macro2D] {
    fn pack(&self, grid: &Grid2D, face: Face) -> Vec<f64> {
        face_cells(grid, face)
            .into_iter()
            .flat_map(|(_, c, _)| self[grid.cell(c.0, c.1)].to_array())
            .collect()
    }

    fn unpack(&mut self, grid: &Grid2D, face: Face, data: &[f64]) {
        for ((g, _, _), a) in face_cells(grid, face).into_iter().zip(data.chunks_exact(6)) {
            self[grid.cell(g.0, g.1)] = Macro2D::from_array(a.try_into().expect("six components"));
        }
    }
}

impl HaloField for [HeatTensor2D] {
    fn pack(&self, grid: &Grid2D, face: Face) -> Vec<f64> {
        face_cells(grid, face)
            .into_iter()
            .flat_map(|(_, c, _)| self[grid.cell(c.0, c.1)].to_array())
            .collect()
    }

    fn unpack(&mut self, grid: &Grid2D, face: Face, data: &[f64]) {
        for ((g, _, _), a) in face_cells(grid, face).into_iter().zip(data.chunks_exact(4)) {
            self[grid.cell(g.0, g.1)] =
                HeatTensor2D::from_array(a.try_into().expect("four components"));
        }
    }
}

impl HaloField for MicroField2D {
    fn pack(&self, grid: &Grid2D, face: Face) -> Vec<f64> {
        let cells = face_cells(grid, face);
        let mut out = Vec::with_capacity(cells.len() * self.nv);
        for (_, c, _) in cells {
            out.extend_from_slice(self.cell(c.0, c.1));
        }
        out
    }

    fn unpack(&mut self, grid: &Grid2D, face: Face, data: &[f64]) {
        let nv = self.nv;
        for ((g, _, _), a) in face_cells(grid, face)
            .into_iter()
            .zip(data.chunks_exact(nv))
        {
            self.cell_mut(g.0, g.1).copy_from_slice(a);
        }
    }
}

/// One worker's channel endpoints, indexed by face.
pub struct Links {
    pub id: usize,
    tx: [Option<Sender<Vec<f64>>>; 4],
    rx: [Option<Receiver<Vec<f64>>>; 4],
}

impl Links {
    /// Send the owned layers on `faces`, then receive the matching halos. Physical faces are
    /// skipped; a vanished neighbour aborts with a worker error.
    pub fn exchange<F: HaloField + ?Sized>(
        &self,
        field: &mut F,
        grid: &Grid2D,
        faces: &[Face],
    ) -> Result<()> {
        for &f in faces {
            if let Some(tx) = &self.tx[f.index()] {
                tx.send(field.pack(grid, f)).map_err(|_| Error::Worker {
                    worker: self.id,
                    msg: format!("neighbour across {f:?} face stopped"),
                })?;
            }
        }
        for &f in faces {
            if let Some(rx) = &self.rx[f.index()] {
                let data = rx.recv().map_err(|_| Error::Worker {
                    worker: self.id,
                    msg: format!("neighbour across {f:?} face stopped"),
                })?;
                field.unpack(grid, f, &data);
            }
        }
        Ok(())
    }
}

/// Channel endpoints for every worker of a plan.
pub fn build_links(plan: &HaloPlan) -> Vec<Links> {
    let n = plan.n_workers();
    let mut links: Vec<Links> = (0..n)
        .map(|id| Links {
            id,
            tx: Default::default(),
            rx: Default::default(),
        })
        .collect();
    for b in &plan.blocks {
        for f in Face::ALL {
            if let Some(nb) = b.neighbor(f) {
                // data arriving at b's `f` halo is sent by `nb` through its opposite face
                let (tx, rx) = channel();
                links[b.id].rx[f.index()] = Some(rx);
                links[nb].tx[f.opposite().index()] = Some(tx);
            }
        }
    }
    links
}
