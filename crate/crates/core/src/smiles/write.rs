use std::fmt::Write as _;

use crate::mol::{Atom, BondOrder, Molecule, IMPLICIT};
use crate::perceive;

/// Writes `mol` with traversal decisions driven by `ranks`: each component
/// starts at its lowest-ranked atom and neighbours are visited in ascending
/// rank. Returns the string and the atoms in output order.
pub(crate) fn write_ranked(mol: &Molecule, ranks: &[usize]) -> (String, Vec<usize>) {
    let view = View::natural(mol);
    if view.consistent(mol) {
        return Writer::new(mol, ranks, view).run();
    }
    // Some aromatic atom would not reparse with the same pi count; fall back
    // to a Kekulé form chosen in rank order so the output stays canonical.
    let mut perm = vec![0usize; ranks.len()];
    let mut order: Vec<usize> = (0..ranks.len()).collect();
    order.sort_by_key(|&i| ranks[i]);
    for (new, &old) in order.iter().enumerate() {
        perm[old] = new;
    }
    let pm = mol.permuted(&perm);
    let kek = pm.kekule_orders();
    let orders = mol
        .bonds()
        .iter()
        .map(|b| {
            let idx = pm.bond_between(perm[b.a], perm[b.b]).expect("bond preserved by permutation");
            kek[idx]
        })
        .collect();
    let view = View { aromatic: vec![false; mol.atom_count()], orders };
    Writer::new(mol, ranks, view).run()
}

/// Aromatic flags and bond orders as they will be written.
struct View {
    aromatic: Vec<bool>,
    orders: Vec<BondOrder>,
}

impl View {
    fn natural(mol: &Molecule) -> View {
        View {
            aromatic: mol.atoms().iter().map(|a| a.aromatic).collect(),
            orders: mol.bonds().iter().map(|b| b.order).collect(),
        }
    }

    fn used(&self, mol: &Molecule, i: usize) -> u32 {
        mol.neighbors(i).iter().map(|&(_, b)| self.orders[b].valence()).sum()
    }

    fn consistent(&self, mol: &Molecule) -> bool {
        (0..mol.atom_count()).all(|i| {
            !self.aromatic[i] || {
                let a = mol.atom(i);
                a.element.can_be_aromatic()
                    && perceive::aromatic_needs_pi(a, self.used(mol, i) + u32::from(a.hydrogens))
            }
        })
    }
}

struct Writer<'a> {
    mol: &'a Molecule,
    ranks: &'a [usize],
    view: View,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<(usize, usize)>>,
    openings: Vec<Vec<(usize, usize)>>,
    closings: Vec<Vec<(usize, usize)>>,
    order: Vec<usize>,
    pos: Vec<usize>,
    first: Vec<usize>,
    dir: Vec<Option<bool>>,
    digit: Vec<u8>,
    free: [bool; 100],
    out: String,
}

impl<'a> Writer<'a> {
    fn new(mol: &'a Molecule, ranks: &'a [usize], view: View) -> Self {
        let n = mol.atom_count();
        Writer {
            mol,
            ranks,
            view,
            parent: vec![None; n],
            children: vec![Vec::new(); n],
            openings: vec![Vec::new(); n],
            closings: vec![Vec::new(); n],
            order: Vec::with_capacity(n),
            pos: vec![usize::MAX; n],
            first: vec![usize::MAX; mol.bond_count()],
            dir: vec![None; mol.bond_count()],
            digit: vec![0; mol.bond_count()],
            free: [true; 100],
            out: String::new(),
        }
    }

    fn run(mut self) -> (String, Vec<usize>) {
        let mut comps = self.mol.components();
        comps.sort_by_key(|c| c.iter().map(|&i| self.ranks[i]).min());
        let roots: Vec<usize> = comps
            .iter()
            .map(|c| *c.iter().min_by_key(|&&i| self.ranks[i]).expect("non-empty component"))
            .collect();
        for &r in &roots {
            self.plan(r);
        }
        self.assign_directions();
        for (k, &r) in roots.iter().enumerate() {
            if k > 0 {
                self.out.push('.');
            }
            self.emit(r);
        }
        (self.out, self.order)
    }

    fn sorted_neighbors(&self, v: usize) -> Vec<(usize, usize)> {
        let mut nb = self.mol.neighbors(v).to_vec();
        nb.sort_by_key(|&(w, _)| self.ranks[w]);
        nb
    }

    /// Depth-first pass recording tree edges and ring closures.
    fn plan(&mut self, root: usize) {
        let mut done = vec![false; self.mol.bond_count()];
        let mut stack = vec![(root, self.sorted_neighbors(root), 0usize)];
        self.visit(root);
        while let Some((v, nb, idx)) = stack.last_mut() {
            let v = *v;
            if *idx == nb.len() {
                stack.pop();
                continue;
            }
            let (w, b) = nb[*idx];
            *idx += 1;
            if done[b] {
                continue;
            }
            done[b] = true;
            if self.pos[w] == usize::MAX {
                self.children[v].push((w, b));
                self.parent[w] = Some(b);
                self.first[b] = v;
                self.visit(w);
                let nbw = self.sorted_neighbors(w);
                stack.push((w, nbw, 0));
            } else {
                self.openings[w].push((v, b));
                self.closings[v].push((w, b));
                self.first[b] = w;
            }
        }
    }

    fn visit(&mut self, v: usize) {
        self.pos[v] = self.order.len();
        self.order.push(v);
    }

    fn single(&self, b: usize) -> bool {
        self.view.orders[b] == BondOrder::Single
    }

    /// Places `/` and `\` so that each stored double-bond configuration is
    /// reproduced on reparse.
    fn assign_directions(&mut self) {
        let mut dbs: Vec<usize> = (0..self.mol.bond_count())
            .filter(|&b| self.mol.bond(b).stereo.is_some() && self.view.orders[b] == BondOrder::Double)
            .collect();
        dbs.sort_by_key(|&b| {
            let bd = self.mol.bond(b);
            let (p, q) = (self.pos[bd.a], self.pos[bd.b]);
            (p.min(q), p.max(q))
        });
        for b in dbs {
            let bd = self.mol.bond(b);
            let st = bd.stereo.expect("filtered");
            // Orient by output position so the arbitrary first choice does
            // not depend on how the bond was stored.
            let (u, v, anchor_u, anchor_v) = if self.pos[bd.a] < self.pos[bd.b] {
                (bd.a, bd.b, st.anchor_a, st.anchor_b)
            } else {
                (bd.b, bd.a, st.anchor_b, st.anchor_a)
            };
            let cands = |u: usize, v: usize| -> Vec<(usize, usize)> {
                let mut c: Vec<(usize, usize)> = self
                    .mol
                    .neighbors(u)
                    .iter()
                    .copied()
                    .filter(|&(x, e)| x != v && self.single(e))
                    .collect();
                c.sort_by_key(|&(x, _)| self.pos[x]);
                c
            };
            let ca = cands(u, v);
            let cb = cands(v, u);
            if ca.is_empty() || cb.is_empty() {
                continue;
            }
            let up = |s: &Self, e: usize, u: usize| s.dir[e].map(|sl| if s.first[e] == u { sl } else { !sl });
            let (xa, upa) = match ca.iter().find(|&&(_, e)| self.dir[e].is_some()) {
                Some(&(x, e)) => (x, up(self, e, u).expect("directed")),
                None => (ca[0].0, true),
            };
            let side_a = if xa == anchor_u { upa } else { !upa };
            let want_b = if st.cis { side_a } else { !side_a };
            let want_a = |y: usize| if y == xa { upa } else { !upa };
            let want_b = |y: usize| if y == anchor_v { want_b } else { !want_b };
            self.mark_side(u, &ca, want_a);
            self.mark_side(v, &cb, want_b);
        }
    }

    /// Directs the first candidate bond around `u` (unless one is already
    /// directed) and every candidate shared with another stereo double bond.
    fn mark_side(&mut self, u: usize, cands: &[(usize, usize)], want: impl Fn(usize) -> bool) {
        let any_directed = cands.iter().any(|&(_, e)| self.dir[e].is_some());
        for (k, &(y, e)) in cands.iter().enumerate() {
            if self.dir[e].is_some() {
                continue;
            }
            let shared = self.mol.neighbors(y).iter().any(|&(_, f)| {
                self.view.orders[f] == BondOrder::Double && self.mol.bond(f).stereo.is_some()
            });
            if (k == 0 && !any_directed) || shared {
                let w = want(y);
                self.dir[e] = Some(if self.first[e] == u { w } else { !w });
            }
        }
    }

    fn bond_symbol(&self, b: usize) -> &'static str {
        let bd = self.mol.bond(b);
        match self.view.orders[b] {
            BondOrder::Double => "=",
            BondOrder::Triple => "#",
            BondOrder::Aromatic => "",
            BondOrder::Single => match self.dir[b] {
                Some(true) => "/",
                Some(false) => "\\",
                None if self.view.aromatic[bd.a] && self.view.aromatic[bd.b] => "-",
                None => "",
            },
        }
    }

    fn emit(&mut self, root: usize) {
        enum Step {
            Atom(usize),
            Open,
            Close,
        }
        let mut stack = vec![Step::Atom(root)];
        while let Some(step) = stack.pop() {
            match step {
                Step::Close => self.out.push(')'),
                Step::Open => self.out.push('('),
                Step::Atom(v) => {
                    if let Some(b) = self.parent[v] {
                        let s = self.bond_symbol(b);
                        self.out.push_str(s);
                    }
                    self.emit_atom(v);
                    let kids = self.children[v].clone();
                    let last = kids.len().saturating_sub(1);
                    // Push in reverse so the first child is emitted first.
                    for (k, &(w, _)) in kids.iter().enumerate().rev() {
                        if k == last {
                            stack.push(Step::Atom(w));
                        } else {
                            stack.push(Step::Close);
                            stack.push(Step::Atom(w));
                            stack.push(Step::Open);
                        }
                    }
                }
            }
        }
    }

    fn emit_atom(&mut self, v: usize) {
        let atom = self.mol.atom(v);
        // Neighbour order as a parser will see it.
        let mut written: Vec<usize> = Vec::with_capacity(4);
        if let Some(b) = self.parent[v] {
            written.push(self.mol.bond(b).other(v));
        }
        let has_implicit = atom.stereo.is_some_and(|s| s.order.contains(&IMPLICIT));
        if has_implicit {
            written.push(IMPLICIT);
        }
        written.extend(self.closings[v].iter().map(|&(w, _)| w));
        written.extend(self.openings[v].iter().map(|&(w, _)| w));
        written.extend(self.children[v].iter().map(|&(w, _)| w));
        let chirality = atom.stereo.and_then(|s| {
            let order: [usize; 4] = written.as_slice().try_into().ok()?;
            s.clockwise_for(&order).map(|cw| if cw { "@@" } else { "@" })
        });
        let used = self.view.used(self.mol, v);
        let token = atom_token(atom, self.view.aromatic[v], used, chirality);
        self.out.push_str(&token);

        let mut released = Vec::new();
        for &(_, b) in &self.closings[v] {
            let d = self.digit[b];
            push_digit(&mut self.out, d);
            released.push(d);
        }
        let opens = self.openings[v].clone();
        for (_, b) in opens {
            let d = (1..100).find(|&d| self.free[d]).expect("fewer than 100 open rings") as u8;
            self.free[d as usize] = false;
            self.digit[b] = d;
            let s = self.bond_symbol(b);
            self.out.push_str(s);
            push_digit(&mut self.out, d);
        }
        for d in released {
            self.free[d as usize] = true;
        }
    }
}

fn push_digit(out: &mut String, d: u8) {
    if d < 10 {
        out.push(char::from(b'0' + d));
    } else {
        let _ = write!(out, "%{d:02}");
    }
}

fn atom_token(atom: &Atom, aromatic: bool, used: u32, chirality: Option<&str>) -> String {
    let el = atom.element;
    let bare_ok = chirality.is_none()
        && el.is_organic_subset()
        && atom.charge == 0
        && atom.isotope.is_none()
        && atom.map_index.is_none()
        && if aromatic {
            matches!(el.symbol(), "B" | "C" | "N" | "O" | "P" | "S")
                && perceive::aromatic_needs_pi(atom, used)
                && el.target_valence(0, used + 1).map(|t| t - used - 1)
                    == Some(u32::from(atom.hydrogens))
        } else {
            el.target_valence(0, used).map(|t| t - used) == Some(u32::from(atom.hydrogens))
        };
    let symbol = if aromatic { el.symbol().to_ascii_lowercase() } else { el.symbol().to_string() };
    if bare_ok {
        return symbol;
    }
    let mut s = String::from("[");
    if let Some(iso) = atom.isotope {
        let _ = write!(s, "{iso}");
    }
    s.push_str(&symbol);
    if let Some(c) = chirality {
        s.push_str(c);
    }
    match atom.hydrogens {
        0 => {}
        1 => s.push('H'),
        h => {
            let _ = write!(s, "H{h}");
        }
    }
    match atom.charge {
        0 => {}
        1 => s.push('+'),
        -1 => s.push('-'),
        c if c > 0 => {
            let _ = write!(s, "+{c}");
        }
        c => {
            let _ = write!(s, "-{}", -c);
        }
    }
    if let Some(m) = atom.map_index {
        let _ = write!(s, ":{m}");
    }
    s.push(']');
    s
}
