//! Rewriting an arbitrary mixed quiver as a zigzag quiver, and pulling
//! polynomials on the zigzag quiver back to the original one.
//!
//! Fixed vertices first get an isolated dual partner. If that is not yet
//! zigzag, every pair `(u, v)` with `u` plain is doubled: copies `ū` (plain)
//! and `v̄` (dual) take over the tails of arrows leaving `u` and `v`, a new
//! arrow `ū → u` is added, and φ becomes `u ↔ v̄`, `v ↔ ū`. Finally every
//! arrow between two dual vertices is reversed onto the φ-images of its ends.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::error::QuiverError;
use crate::poly::{Poly, VarId};
use crate::quiver::{classify_zigzag, Alpha, Arrow, CoordinateSystem, MixedQuiver, Vertex, ZigzagQuiver};
use crate::scalar::Field;

/// How a target arrow arose; the numbers are the usual type labels 1, 2, 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ArrowKind {
    /// A source arrow, possibly with its tail moved to a copy.
    Kept,
    /// The new arrow `ū → u` closing a doubled pair.
    Link,
    /// A source arrow between two dual vertices, reversed.
    Reversed,
}

impl ArrowKind {
    pub fn number(self) -> u8 {
        match self {
            ArrowKind::Kept => 1,
            ArrowKind::Link => 2,
            ArrowKind::Reversed => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TargetArrow {
    pub id: String,
    pub kind: ArrowKind,
    /// Index of the originating source arrow (kinds `Kept` and `Reversed`).
    pub source: Option<usize>,
    /// The plain and dual vertex of the pair a `Link` closes.
    pub pair: Option<(String, String)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AddedRole {
    /// Partner of a φ-fixed vertex.
    Partner,
    /// Copy made while doubling a pair.
    Copy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AddedVertex {
    pub id: String,
    pub origin: String,
    pub role: AddedRole,
}

#[derive(Clone, Debug)]
pub struct ReductionMap {
    source: MixedQuiver,
    target: ZigzagQuiver,
    doubled: bool,
    added: Vec<AddedVertex>,
    // in target arrow order
    arrows: Vec<TargetArrow>,
}

struct Names {
    used: HashSet<String>,
}

impl Names {
    fn fresh(&mut self, base: &str, suffix: &str) -> String {
        let mut glue = String::from("_");
        loop {
            let id = format!("{base}{glue}{suffix}");
            if self.used.insert(id.clone()) {
                return id;
            }
            glue.push('_');
        }
    }
}

pub fn reduce(q: &MixedQuiver) -> Result<ReductionMap, QuiverError> {
    q.check()?;
    let mut vertex_names = Names {
        used: q.vertices.iter().map(|v| v.id.clone()).collect(),
    };
    let mut arrow_names = Names {
        used: q.arrows.iter().map(|a| a.id.clone()).collect(),
    };
    let mut vertices = q.vertices.clone();
    let mut phi = q.phi.clone();
    let mut added = Vec::new();
    for (u, v) in q.vertices.iter().enumerate() {
        if q.phi_of(u) != u {
            continue;
        }
        let id = vertex_names.fresh(&v.id, "pair");
        vertices.push(Vertex {
            id: id.clone(),
            dim: v.dim,
            alpha: Alpha::Dual,
        });
        phi.push([v.id.clone(), id.clone()]);
        added.push(AddedVertex {
            id,
            origin: v.id.clone(),
            role: AddedRole::Partner,
        });
    }
    let paired = MixedQuiver {
        vertices,
        phi,
        arrows: q.arrows.clone(),
    };
    let kept: Vec<TargetArrow> = q
        .arrows
        .iter()
        .enumerate()
        .map(|(k, a)| TargetArrow {
            id: a.id.clone(),
            kind: ArrowKind::Kept,
            source: Some(k),
            pair: None,
        })
        .collect();
    if let Ok(target) = classify_zigzag(&paired) {
        return Ok(ReductionMap {
            source: q.clone(),
            target,
            doubled: false,
            added,
            arrows: kept,
        });
    }

    let mut vertices = paired.vertices.clone();
    let mut arrows = paired.arrows.clone();
    let mut table = kept;
    let mut phi = Vec::new();
    let mut tail_move: HashMap<String, String> = HashMap::new();
    let mut links = Vec::new();
    for orbit in paired.orbits() {
        let (u, v) = if paired.vertices[orbit[0]].alpha == Alpha::Plain {
            (orbit[0], orbit[1])
        } else {
            (orbit[1], orbit[0])
        };
        let (uid, vid) = (paired.vertices[u].id.clone(), paired.vertices[v].id.clone());
        let dim = paired.vertices[u].dim;
        let ubar = vertex_names.fresh(&uid, "bar");
        let vbar = vertex_names.fresh(&vid, "bar");
        for (id, alpha, origin) in [(&ubar, Alpha::Plain, &uid), (&vbar, Alpha::Dual, &vid)] {
            vertices.push(Vertex {
                id: id.clone(),
                dim,
                alpha,
            });
            added.push(AddedVertex {
                id: id.clone(),
                origin: origin.clone(),
                role: AddedRole::Copy,
            });
        }
        tail_move.insert(uid.clone(), ubar.clone());
        tail_move.insert(vid.clone(), vbar.clone());
        phi.push([uid.clone(), vbar.clone()]);
        phi.push([vid.clone(), ubar.clone()]);
        let link = arrow_names.fresh(&uid, "link");
        links.push(Arrow {
            id: link.clone(),
            tail: ubar,
            head: uid.clone(),
        });
        table.push(TargetArrow {
            id: link,
            kind: ArrowKind::Link,
            source: None,
            pair: Some((uid, vid)),
        });
    }
    for a in &mut arrows {
        a.tail = tail_move[&a.tail].clone();
    }
    arrows.extend(links);
    let doubled = MixedQuiver { vertices, phi, arrows };
    let mut reversed = doubled.clone();
    for (k, a) in doubled.arrows.iter().enumerate() {
        let (t, h) = (doubled.vertex_index(&a.tail).unwrap(), doubled.vertex_index(&a.head).unwrap());
        if doubled.vertices[t].alpha == Alpha::Dual && doubled.vertices[h].alpha == Alpha::Dual {
            reversed.arrows[k].head = doubled.vertices[doubled.phi_of(t)].id.clone();
            reversed.arrows[k].tail = doubled.vertices[doubled.phi_of(h)].id.clone();
            table[k].kind = ArrowKind::Reversed;
        }
    }
    let target = classify_zigzag(&reversed)?;
    Ok(ReductionMap {
        source: q.clone(),
        target,
        doubled: true,
        added,
        arrows: table,
    })
}

impl ReductionMap {
    pub fn source(&self) -> &MixedQuiver {
        &self.source
    }

    pub fn target(&self) -> &ZigzagQuiver {
        &self.target
    }

    /// Whether pairs were doubled; `false` when adding partners already gave a zigzag quiver.
    pub fn doubled(&self) -> bool {
        self.doubled
    }

    pub fn added_vertices(&self) -> &[AddedVertex] {
        &self.added
    }

    /// Target arrows in target declaration order.
    pub fn arrows(&self) -> &[TargetArrow] {
        &self.arrows
    }

    pub fn arrow(&self, id: &str) -> Option<&TargetArrow> {
        self.arrows.iter().find(|a| a.id == id)
    }

    /// Target vertex of every source vertex, followed by the added vertices.
    pub fn vertex_map(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = self.source.vertices.iter().map(|v| (v.id.clone(), v.id.clone())).collect();
        out.extend(self.added.iter().map(|a| (a.origin.clone(), a.id.clone())));
        out
    }

    pub fn source_coordinates(&self) -> CoordinateSystem {
        self.source.coordinates()
    }

    pub fn target_coordinates(&self) -> CoordinateSystem {
        self.target.coordinates()
    }

    /// The image of one target variable.
    pub fn image(&self, v: &VarId, field: Field) -> Result<Poly, QuiverError> {
        let coords = self.target.coordinates();
        let unknown = || QuiverError::Dimension(format!("{v} is not a coordinate of the target quiver"));
        let a = coords.arrow(v.family, v.arrow).ok_or_else(unknown)?;
        if v.row == 0 || v.col == 0 || v.row > a.rows || v.col > a.cols {
            return Err(unknown());
        }
        let entry = self.arrow(&a.id).expect("every target arrow is tabulated");
        Ok(match entry.kind {
            ArrowKind::Kept => Poly::var(field, VarId::x(entry.source.unwrap() + 1, v.row, v.col)),
            ArrowKind::Reversed => Poly::var(field, VarId::x(entry.source.unwrap() + 1, v.col, v.row)),
            ArrowKind::Link => Poly::from_i64(field, (v.row == v.col) as i64),
        })
    }

    /// Applies the substitution to a polynomial in target coordinates.
    pub fn phi_substitute(&self, f: &Poly) -> Result<Poly, QuiverError> {
        let field = f.field();
        f.substitute_with(|v| self.image(v, field).map_err(|e| crate::error::PolyError::Parse(e.to_string())))
            .map_err(|e| QuiverError::Dimension(e.to_string()))
    }

    /// Every target variable with its image.
    pub fn substitution_table(&self, field: Field) -> Vec<(VarId, Poly)> {
        self.target
            .coordinates()
            .variables()
            .into_iter()
            .map(|v| {
                let image = self.image(&v, field).expect("target variable");
                (v, image)
            })
            .collect()
    }
}

impl fmt::Display for ReductionMap {
    /// The arrow table: `id type family-index source`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords = self.target.coordinates();
        for a in &coords.arrows {
            let entry = self.arrow(&a.id).expect("tabulated");
            let origin = match (&entry.source, &entry.pair) {
                (Some(k), _) => self.source.arrows[*k].id.clone(),
                (None, Some((u, v))) => format!("pair {u} {v}"),
                (None, None) => String::from("-"),
            };
            writeln!(
                f,
                "{} type {} {}{} from {}",
                a.id,
                entry.kind.number(),
                a.family.letter(),
                a.index,
                origin
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Family;
    use crate::quiver::tests::example_quiver;

    fn endpoints(zz: &ZigzagQuiver, id: &str) -> (String, String) {
        let q = zz.quiver();
        let a = &q.arrows[q.arrow_index(id).unwrap()];
        (a.tail.clone(), a.head.clone())
    }

    #[test]
    fn worked_example() {
        let map = reduce(&example_quiver()).unwrap();
        let zz = map.target();
        let kinds: Vec<(String, u8)> = map.arrows().iter().map(|a| (a.id.clone(), a.kind.number())).collect();
        assert_eq!(
            kinds,
            vec![
                ("a1".into(), 1),
                ("a2".into(), 1),
                ("a3".into(), 1),
                ("a4".into(), 3),
                ("v_link".into(), 2)
            ]
        );
        assert_eq!(endpoints(zz, "a1"), ("v_bar".into(), "w".into()));
        assert_eq!(endpoints(zz, "a2"), ("w_bar".into(), "v".into()));
        for id in ["a3", "a4", "v_link"] {
            assert_eq!(endpoints(zz, id), ("v_bar".into(), "v".into()));
        }
        assert_eq!(zz.arrow_counts(), [3, 1, 1]);
        assert_eq!((zz.l1(), zz.l2()), (1, 1));
        assert!(zz.quiver().vertices.iter().all(|v| v.dim == 2));
    }

    #[test]
    fn substitution_rules() {
        let map = reduce(&example_quiver()).unwrap();
        let f = Field::Rational;
        let coords = map.target_coordinates();
        let link = coords.arrows.iter().find(|a| a.id == "v_link").unwrap();
        let a1 = coords.arrows.iter().find(|a| a.id == "a1").unwrap();
        let a4 = coords.arrows.iter().find(|a| a.id == "a4").unwrap();
        let y = |a: &crate::quiver::ArrowCoords, i, j| Poly::var(f, VarId::new(a.family, a.index, i, j));
        let diag = y(link, 1, 1).mul(&y(a1, 1, 2));
        assert_eq!(map.phi_substitute(&diag).unwrap(), Poly::var(f, VarId::x(1, 1, 2)));
        let off = y(link, 1, 2).mul(&y(a1, 1, 2));
        assert!(map.phi_substitute(&off).unwrap().is_zero());
        assert_eq!(map.phi_substitute(&y(a4, 1, 2)).unwrap(), Poly::var(f, VarId::x(4, 2, 1)));
        assert!(map.phi_substitute(&Poly::var(f, VarId::new(Family::Z, 7, 1, 1))).is_err());
        assert_eq!(map.substitution_table(f).len(), 20);
    }

    #[test]
    fn fixed_vertex_gets_a_partner_only() {
        let q = MixedQuiver::from_json(r#"{"vertices": [{"id": "u", "dim": 3, "alpha": "1"}]}"#).unwrap();
        let map = reduce(&q).unwrap();
        assert!(!map.doubled());
        assert_eq!(map.target().quiver().vertices.len(), 2);
        assert_eq!(map.added_vertices()[0].id, "u_pair");
        assert!(map.target().quiver().arrows.is_empty());
    }

    #[test]
    fn zigzag_input_is_kept() {
        let zz = ZigzagQuiver::from_parts(&[2], &[1], &[(1, 1)], &[(1, 1)], &[]).unwrap();
        let map = reduce(zz.quiver()).unwrap();
        assert!(!map.doubled());
        assert_eq!(map.target().quiver(), zz.quiver());
        assert!(map.arrows().iter().all(|a| a.kind == ArrowKind::Kept));
    }

    #[test]
    fn names_avoid_collisions() {
        let q = MixedQuiver::from_json(
            r#"{"vertices": [{"id": "u", "dim": 1, "alpha": "1"}, {"id": "u_pair", "dim": 1, "alpha": "1"}],
                "arrows": [{"id": "a", "tail": "u", "head": "u"}]}"#,
        )
        .unwrap();
        let map = reduce(&q).unwrap();
        let ids: Vec<&str> = map.added_vertices().iter().map(|a| a.id.as_str()).collect();
        assert!(ids.contains(&"u__pair"));
        assert!(ids.contains(&"u_pair_pair"));
    }
}
