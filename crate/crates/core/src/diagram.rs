//! Oriented link diagrams given as planar-diagram (PD) codes.
//!
//! A crossing `X a b c d` lists the four edge labels around the crossing
//! counterclockwise, starting from the incoming under-strand `a`; `c` is the
//! outgoing under-strand and `b`, `d` are the two halves of the over-strand.
//! Every edge label occurs exactly twice in the file. Orientation is read off
//! the under-strands and propagated along each component; a component that
//! never passes under anything is oriented by increasing label.
//!
//! Crossingless unknotted components cannot be written as crossings, so they
//! are declared with a `components <n>` header line.

use std::fmt;

use crate::error::DiagramError;
use crate::fox::{FreeWord, GroupPresentation};

/// Slot positions inside a crossing.
const UNDER_IN: usize = 0;
const UNDER_OUT: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    /// Edge labels counterclockwise from the incoming under-strand.
    pub arcs: [u64; 4],
    /// +1 when the over-strand runs from `d` to `b`, -1 when it runs `b` to `d`.
    pub sign: i8,
    /// 1-based source line.
    pub line: usize,
}

impl Crossing {
    pub fn under_in(&self) -> u64 {
        self.arcs[0]
    }

    pub fn under_out(&self) -> u64 {
        self.arcs[2]
    }

    /// Either half of the over-strand; both belong to the same Wirtinger arc.
    pub fn over(&self) -> u64 {
        self.arcs[1]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    /// Edges occurring in crossings (labels `1..=edge_count`).
    edge_count: u64,
    /// Crossingless components, labelled after the crossing edges.
    crossingless: usize,
    /// Indexed by `label - 1`, covering crossingless components too.
    component_of_arc: Vec<usize>,
    components: usize,
}

impl LinkDiagram {
    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    /// Number of arc labels, one per crossingless component included.
    pub fn arc_count(&self) -> u64 {
        self.edge_count + self.crossingless as u64
    }

    pub fn component_of_arc(&self, label: u64) -> Option<usize> {
        if label == 0 {
            return None;
        }
        self.component_of_arc.get(label as usize - 1).copied()
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    pub fn crossingless_components(&self) -> usize {
        self.crossingless
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign as i64).sum()
    }

    /// Maximal over-arcs: each is the set of edge labels merged by passing
    /// over crossings, ordered by smallest label. Crossingless components
    /// contribute one arc each, last.
    pub fn wirtinger_arcs(&self) -> Vec<Vec<u64>> {
        let n = self.edge_count as usize;
        let mut uf = UnionFind::new(n);
        for c in &self.crossings {
            uf.union(c.arcs[1] as usize - 1, c.arcs[3] as usize - 1);
        }
        let mut classes: Vec<Vec<u64>> = Vec::new();
        let mut class_of_root = vec![usize::MAX; n];
        for e in 0..n {
            let root = uf.find(e);
            if class_of_root[root] == usize::MAX {
                class_of_root[root] = classes.len();
                classes.push(Vec::new());
            }
            classes[class_of_root[root]].push(e as u64 + 1);
        }
        for i in 0..self.crossingless {
            classes.push(vec![self.edge_count + 1 + i as u64]);
        }
        classes
    }

    /// The Wirtinger presentation: one generator per over-arc, one relator
    /// `x_out * (o^s x_in o^-s)^-1` per crossing with over-arc `o` and sign `s`.
    pub fn wirtinger(&self) -> GroupPresentation {
        let arcs = self.wirtinger_arcs();
        let mut gen_of_label = vec![0usize; self.arc_count() as usize];
        for (g, class) in arcs.iter().enumerate() {
            for &label in class {
                gen_of_label[label as usize - 1] = g;
            }
        }
        let relators = self
            .crossings
            .iter()
            .map(|c| {
                let out = gen_of_label[c.under_out() as usize - 1];
                let inc = gen_of_label[c.under_in() as usize - 1];
                let over = gen_of_label[c.over() as usize - 1];
                let s = c.sign;
                FreeWord::from_letters(vec![(out, 1), (over, s), (inc, -1), (over, -s)])
            })
            .collect();
        let component_of_generator = arcs
            .iter()
            .map(|class| self.component_of_arc[class[0] as usize - 1])
            .collect();
        GroupPresentation::new(arcs.len(), relators, component_of_generator, self.components)
            .expect("Wirtinger relators have zero exponent sum")
    }
}

impl fmt::Display for LinkDiagram {
    /// Writes the diagram back in PD file format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.crossingless > 0 {
            writeln!(f, "components {}", self.crossingless)?;
        }
        for c in &self.crossings {
            writeln!(f, "X {} {} {} {}", c.arcs[0], c.arcs[1], c.arcs[2], c.arcs[3])?;
        }
        Ok(())
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as root so class order is stable
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// A position inside a crossing: (crossing index, slot 0..4).
type Slot = (usize, usize);

fn opposite(slot: Slot) -> Slot {
    (slot.0, (slot.1 + 2) % 4)
}

fn malformed(line: usize, msg: impl Into<String>) -> DiagramError {
    DiagramError::Malformed { line, msg: msg.into() }
}

/// Parses and validates a PD file.
pub fn parse_pd(text: &str) -> Result<LinkDiagram, DiagramError> {
    let mut raw: Vec<([u64; 4], usize)> = Vec::new();
    let mut crossingless: Option<usize> = None;

    for (idx, full_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = full_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        match tokens[0] {
            "components" => {
                if tokens.len() != 2 {
                    return Err(malformed(line_no, "expected `components <count>`"));
                }
                if crossingless.is_some() {
                    return Err(malformed(line_no, "duplicate `components` header"));
                }
                let count = tokens[1]
                    .parse::<usize>()
                    .map_err(|_| malformed(line_no, format!("bad component count `{}`", tokens[1])))?;
                crossingless = Some(count);
            }
            "X" => {
                if tokens.len() != 5 {
                    return Err(malformed(line_no, format!("crossing needs 4 labels, found {}", tokens.len() - 1)));
                }
                let mut arcs = [0u64; 4];
                for (slot, tok) in arcs.iter_mut().zip(&tokens[1..]) {
                    let v = tok
                        .parse::<u64>()
                        .map_err(|_| malformed(line_no, format!("bad arc label `{tok}`")))?;
                    if v == 0 {
                        return Err(malformed(line_no, "arc labels start at 1"));
                    }
                    *slot = v;
                }
                raw.push((arcs, line_no));
            }
            other => return Err(malformed(line_no, format!("unexpected token `{other}`"))),
        }
    }

    let crossingless = crossingless.unwrap_or(0);
    if raw.is_empty() && crossingless == 0 {
        return Err(malformed(0, "diagram has no crossings and no crossingless components"));
    }

    // Each label 1..=N exactly twice.
    let edge_count = raw.iter().flat_map(|(a, _)| a.iter().copied()).max().unwrap_or(0);
    let mut occurrences: Vec<Vec<Slot>> = vec![Vec::new(); edge_count as usize];
    for (ci, (arcs, _)) in raw.iter().enumerate() {
        for (pos, &label) in arcs.iter().enumerate() {
            occurrences[label as usize - 1].push((ci, pos));
        }
    }
    for (i, occ) in occurrences.iter().enumerate() {
        if occ.len() != 2 {
            let line = occ.get(2).or(occ.first()).map_or(0, |&(ci, _)| raw[ci].1);
            return Err(DiagramError::ArcMultiplicity { line, arc: i as u64 + 1, count: occ.len() });
        }
    }
    let label_at = |(ci, pos): Slot| raw[ci].0[pos];
    let other_occurrence = |slot: Slot| -> Slot {
        let occ = &occurrences[label_at(slot) as usize - 1];
        if occ[0] == slot {
            occ[1]
        } else {
            occ[0]
        }
    };

    // Walk components. Walking leaves edge `e` through its exit slot and
    // enters the next edge at the opposite slot of the same crossing.
    let mut component_of_arc = vec![usize::MAX; edge_count as usize];
    // head[ci][pos]: the edge at this slot is incoming at this crossing
    let mut head = vec![[false; 4]; raw.len()];
    let mut components = 0usize;
    for start in 1..=edge_count {
        if component_of_arc[start as usize - 1] != usize::MAX {
            continue;
        }
        // (edge, entry slot, exit slot) in walking order
        let mut walk: Vec<(u64, Slot, Slot)> = Vec::new();
        let first_entry = occurrences[start as usize - 1][0];
        let mut entry = first_entry;
        loop {
            let exit = other_occurrence(entry);
            let edge = label_at(entry);
            walk.push((edge, entry, exit));
            let next_entry = opposite(exit);
            if next_entry == first_entry {
                break;
            }
            entry = next_entry;
            if walk.len() > 2 * edge_count as usize {
                return Err(DiagramError::Tracing { line: raw[entry.0].1, msg: "strand does not close up".into() });
            }
        }

        // Crossing indices whose under-strand agrees with the walking
        // direction, and those that disagree.
        let mut forward_votes = Vec::new();
        let mut backward_votes = Vec::new();
        for &(_, entry, exit) in &walk {
            for (slot, is_exit) in [(entry, false), (exit, true)] {
                match (slot.1, is_exit) {
                    (UNDER_IN, true) | (UNDER_OUT, false) => forward_votes.push(slot.0),
                    (UNDER_IN, false) | (UNDER_OUT, true) => backward_votes.push(slot.0),
                    _ => {}
                }
            }
        }
        let forward = match (forward_votes.is_empty(), backward_votes.is_empty()) {
            (false, false) => {
                let minority = if forward_votes.len() >= backward_votes.len() {
                    backward_votes[0]
                } else {
                    forward_votes[0]
                };
                return Err(DiagramError::Tracing {
                    line: raw[minority].1,
                    msg: format!("component through arc {start} runs against an under-strand orientation"),
                });
            }
            (false, true) => true,
            (true, false) => false,
            // Never passes under: orient by increasing label from `start`,
            // the smallest label of the component.
            (true, true) => {
                let next = walk.get(1).map(|w| w.0);
                let prev = walk.last().map(|w| w.0);
                next == Some(start + 1) || prev != Some(start + 1)
            }
        };

        for &(edge, entry, exit) in &walk {
            component_of_arc[edge as usize - 1] = components;
            let h = if forward { exit } else { entry };
            head[h.0][h.1] = true;
        }
        components += 1;
    }

    let mut crossings = Vec::with_capacity(raw.len());
    for (ci, (arcs, line)) in raw.iter().enumerate() {
        let h = head[ci];
        if !h[0] || h[2] || h[1] == h[3] {
            return Err(DiagramError::Tracing { line: *line, msg: "crossing strands are not consistently oriented".into() });
        }
        let sign = if h[3] { 1 } else { -1 };
        crossings.push(Crossing { arcs: *arcs, sign, line: *line });
    }

    for _ in 0..crossingless {
        component_of_arc.push(components);
        components += 1;
    }

    Ok(LinkDiagram { crossings, edge_count, crossingless, component_of_arc, components })
}
