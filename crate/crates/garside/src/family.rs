//! The binary-matrix braid family: row braids built from crossing blocks,
//! the constrained matrix classes, switching and initializing conjugators,
//! and the closed-form generation of the rigid conjugacy graph.
//!
//! A row `a = (a_1, .., a_p)` over {0,1} determines a permutation braid on
//! `2p+2` strands with `4p+1` crossings. Strands at positions `2i, 2i+1`
//! cross once among themselves when dictated by `a_i`; the remaining
//! "through" strands carry the labels `1, 2, 4, .., 2p, 2p+1` and are routed
//! by a cyclic permutation of those labels. Stacking the `k` rows of a
//! matrix `A` gives a braid that is left-weighted as written and rigid.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use serde_json::json;
use thiserror::Error;

use crate::braid::Braid;
use crate::search::{ConjugacyGraph, ConjugatorKind, GraphEdge};
use crate::simple::SimpleBraid;

pub type BitRow = Vec<bool>;
/// A positive braid word, one generator index per letter.
pub type PositiveWord = Vec<usize>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("matrix rows must be non-empty and share a width of at least 2")]
    BadShape,
    #[error("boundary columns are fixed: column 1 all zeroes, column {p} all ones")]
    BadBoundaryColumns { p: usize },
    #[error("slot {b} outside 0..={p}")]
    BadSlot { b: usize, p: usize },
    #[error("not a constrained-class matrix: {0}")]
    NotM0(String),
    #[error("operation requires a constrained-class element")]
    NotConstrained,
    #[error("initializer requires a terminal element")]
    NotTerminal,
    #[error("cannot parse matrix: {0}")]
    Parse(String),
}

// ---------------------------------------------------------------------------
// The reduced cycle on through-strand labels.

/// Permutation induced on the labels `{1, 2, 4, .., 2p, 2p+1}` of the
/// through strands once the crossing pairs of a row are removed. For every
/// row it is a single cycle of length `p+2`, which is what routes each
/// through strand to a distinct exit block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedCycle {
    map: BTreeMap<usize, usize>,
}

impl ReducedCycle {
    pub fn labels(&self) -> Vec<usize> {
        self.map.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, label: usize) -> usize {
        self.map[&label]
    }

    /// The inverse image of `label`; the cut-head forced-prefix rules are
    /// phrased through this inverse.
    pub fn inverse(&self, label: usize) -> usize {
        *self
            .map
            .iter()
            .find(|(_, v)| **v == label)
            .expect("label outside the reduced cycle")
            .0
    }

    /// Whether the permutation is one cycle through all labels.
    pub fn is_full_cycle(&self) -> bool {
        let start = *self.map.keys().next().expect("empty cycle");
        let mut seen = 1;
        let mut at = self.apply(start);
        while at != start {
            seen += 1;
            if seen > self.map.len() {
                return false;
            }
            at = self.apply(at);
        }
        seen == self.map.len()
    }

    /// The orbit of `start` in application order, beginning with `start`.
    pub fn cycle_from(&self, start: usize) -> Vec<usize> {
        let mut orbit = vec![start];
        let mut at = self.apply(start);
        while at != start {
            orbit.push(at);
            at = self.apply(at);
        }
        orbit
    }
}

/// The label `1` goes to the first zero block; label `2i` continues to the
/// next zero block to the right when `a_i = 0` and falls back to the last
/// one block to the left when `a_i = 1`; the extremes wrap to `2p+1` and
/// back from it to the last one block.
pub fn theta(a: &[bool]) -> ReducedCycle {
    let p = a.len();
    assert!(p >= 2, "rows need at least two entries");
    let top = 2 * p + 1;
    let first_zero = a.iter().position(|&x| !x);
    let last_one = a.iter().rposition(|&x| x);
    let mut map = BTreeMap::new();
    map.insert(1, first_zero.map_or(top, |j| 2 * (j + 1)));
    map.insert(top, last_one.map_or(1, |j| 2 * (j + 1)));
    for i in 1..=p {
        let image = if !a[i - 1] {
            a[i..].iter().position(|&x| !x).map_or(top, |off| 2 * (i + 1 + off))
        } else {
            a[..i - 1].iter().rposition(|&x| x).map_or(1, |j| 2 * (j + 1))
        };
        map.insert(2 * i, image);
    }
    ReducedCycle { map }
}

// ---------------------------------------------------------------------------
// Row braids.

fn row_label_start(a: &[bool], label: usize) -> usize {
    let p = a.len();
    match label {
        1 => 1,
        l if l == 2 * p + 1 => 2 * p + 2,
        l => l + a[l / 2 - 1] as usize,
    }
}

fn row_label_end(a: &[bool], label: usize) -> usize {
    let p = a.len();
    match label {
        1 => 1,
        l if l == 2 * p + 1 => 2 * p + 2,
        l => l + 1 - a[l / 2 - 1] as usize,
    }
}

fn insert_vertical_strand(s: &SimpleBraid, v: usize) -> SimpleBraid {
    let shift = |x: usize| if x >= v { x + 1 } else { x };
    let mut images = vec![0usize; s.n() + 1];
    images[v - 1] = v;
    for x in 1..=s.n() {
        images[shift(x) - 1] = shift(s.map(x));
    }
    SimpleBraid::from_images(&images)
}

fn remove_strand(s: &SimpleBraid, v: usize) -> SimpleBraid {
    debug_assert_eq!(s.map(v), v);
    let unshift = |x: usize| if x > v { x - 1 } else { x };
    let mut images = Vec::with_capacity(s.n() - 1);
    for x in (1..=s.n()).filter(|&x| x != v) {
        images.push(unshift(s.map(x)));
    }
    SimpleBraid::from_images(&images)
}

/// The permutation braid of one row; with a slot `b` present, a vertical
/// strand is inserted at position `2b+2` and all indices at or above it
/// shift up by one.
pub fn alpha_row(a: &[bool], slot: Option<usize>) -> SimpleBraid {
    let p = a.len();
    assert!(p >= 2, "rows need at least two entries");
    let cycle = theta(a);
    let mut images = vec![0usize; 2 * p + 2];
    for i in 1..=p {
        if a[i - 1] {
            images[2 * i - 1] = 2 * i + 1;
        } else {
            images[2 * i] = 2 * i;
        }
    }
    for label in cycle.labels() {
        images[row_label_start(a, label) - 1] = row_label_end(a, cycle.apply(label));
    }
    let base = SimpleBraid::from_images(&images);
    debug_assert_eq!(base.inversions(), 4 * p + 1);
    match slot {
        None => base,
        Some(b) => {
            assert!(b <= p, "slot outside 0..=p");
            insert_vertical_strand(&base, 2 * b + 2)
        }
    }
}

// ---------------------------------------------------------------------------
// Validated matrix elements.

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Plain,
    Tau,
}

/// A validated matrix with optional vertical-strand slot. `side: Tau`
/// represents the flip image of the stored matrix: its braid is
/// `tau(alpha(A))`, and all of its conjugators are flip images of the plain
/// ones; the matrix itself is always stored in plain orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyElement {
    rows: Vec<BitRow>,
    slot: Option<usize>,
    side: Side,
    m0: bool,
}

fn rotation_order(rows: &[BitRow]) -> usize {
    let k = rows.len();
    (1..=k)
        .find(|&d| k % d == 0 && (0..k).all(|i| rows[i] == rows[(i + d) % k]))
        .unwrap_or(k)
}

pub fn make_element(
    rows: Vec<BitRow>,
    slot: Option<usize>,
    require_m0: bool,
) -> Result<FamilyElement, FamilyError> {
    let k = rows.len();
    if k == 0 {
        return Err(FamilyError::BadShape);
    }
    let p = rows[0].len();
    if p < 2 || rows.iter().any(|r| r.len() != p) {
        return Err(FamilyError::BadShape);
    }
    if rows.iter().any(|r| r[0] || !r[p - 1]) {
        return Err(FamilyError::BadBoundaryColumns { p });
    }
    if let Some(b) = slot {
        if b > p {
            return Err(FamilyError::BadSlot { b, p });
        }
    }
    if require_m0 {
        if k < 2 {
            return Err(FamilyError::NotM0("at least two rows required".into()));
        }
        if p < 4 {
            return Err(FamilyError::NotM0("width below 4 leaves no room for the pair columns".into()));
        }
        for c in 2..=p.saturating_sub(3) {
            if !constant_column(&rows, c) {
                return Err(FamilyError::NotM0(format!("column {c} must be constant")));
            }
        }
        for c in [p - 2, p - 1] {
            if constant_column(&rows, c) {
                return Err(FamilyError::NotM0(format!("column {c} must be non-constant")));
            }
        }
        if rotation_order(&rows) != k {
            return Err(FamilyError::NotM0("row-cycling order must equal the row count".into()));
        }
        if let Some(b) = slot {
            if b != p - 2 {
                return Err(FamilyError::NotM0(format!("slot must be {} for odd elements", p - 2)));
            }
        }
    }
    // The flag always reflects actual membership; `require_m0` only turns a
    // miss into an error with a specific message.
    let m0 = require_m0 || make_element(rows.clone(), slot, true).is_ok();
    Ok(FamilyElement { rows, slot, side: Side::Plain, m0 })
}

fn constant_column(rows: &[BitRow], c: usize) -> bool {
    rows.iter().all(|r| r[c - 1] == rows[0][c - 1])
}

impl FamilyElement {
    pub fn rows(&self) -> &[BitRow] {
        &self.rows
    }

    pub fn slot(&self) -> Option<usize> {
        self.slot
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn is_m0(&self) -> bool {
        self.m0
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn p(&self) -> usize {
        self.rows[0].len()
    }

    pub fn n(&self) -> usize {
        2 * self.p() + 2 + self.slot.is_some() as usize
    }

    /// Matrix rows in drawn orientation: the flip side shows the
    /// reversed-and-negated columns of the stored plain matrix.
    pub fn literal_rows(&self) -> Vec<BitRow> {
        match self.side {
            Side::Plain => self.rows.clone(),
            Side::Tau => self
                .rows
                .iter()
                .map(|r| r.iter().rev().map(|&x| !x).collect())
                .collect(),
        }
    }

    /// The braid of the element: stacked row braids, flipped on the tau side.
    pub fn alpha(&self) -> Braid {
        let n = self.n();
        let factors: Vec<SimpleBraid> =
            self.rows.iter().map(|r| alpha_row(r, self.slot)).collect();
        let braid = Braid::from_parts(n, 0, factors.clone());
        debug_assert_eq!(braid.factors(), factors.as_slice(), "row product must be left-weighted as written");
        debug_assert_eq!(braid.inf(), 0);
        debug_assert!(braid.is_rigid());
        match self.side {
            Side::Plain => braid,
            Side::Tau => braid.tau(),
        }
    }

    /// Rotate the first row to the bottom (the matrix form of cycling).
    pub fn cycled(&self) -> Self {
        let mut rows = self.rows.clone();
        rows.rotate_left(1);
        FamilyElement { rows, ..self.clone() }
    }

    /// Rotate the bottom row to the top (inverse cycling).
    pub fn cycled_inv(&self) -> Self {
        let mut rows = self.rows.clone();
        rows.rotate_right(1);
        FamilyElement { rows, ..self.clone() }
    }

    /// The flip image. Stored rows are unchanged; only the side flips, since
    /// flipping the matrix and flipping the braid agree.
    pub fn tau(&self) -> Self {
        let side = match self.side {
            Side::Plain => Side::Tau,
            Side::Tau => Side::Plain,
        };
        FamilyElement { side, ..self.clone() }
    }

    fn with_middle(&self, value: bool) -> Result<Self, FamilyError> {
        if !self.m0 {
            return Err(FamilyError::NotConstrained);
        }
        let p = self.p();
        let mut rows = self.rows.clone();
        for row in &mut rows {
            for c in 2..=p - 3 {
                row[c - 1] = value;
            }
        }
        Ok(FamilyElement { rows, ..self.clone() })
    }

    /// The initial element of the switching lattice: interior columns all one.
    pub fn hat(&self) -> Result<Self, FamilyError> {
        self.with_middle(true)
    }

    /// The terminal element of the switching lattice: interior columns all zero.
    pub fn check(&self) -> Result<Self, FamilyError> {
        self.with_middle(false)
    }

    pub fn is_terminal(&self) -> bool {
        self.m0 && self.check().map(|c| c.rows == self.rows).unwrap_or(false)
    }

    pub fn is_initial(&self) -> bool {
        self.m0 && self.hat().map(|h| h.rows == self.rows).unwrap_or(false)
    }

    /// Values of the constant interior columns `2..=p-3`, left to right.
    fn middle_word(&self) -> Vec<bool> {
        (2..=self.p() - 3).map(|c| self.rows[0][c - 1]).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<String> = self
            .literal_rows()
            .iter()
            .map(|r| r.iter().map(|&x| if x { '1' } else { '0' }).collect())
            .collect();
        json!({
            "rows": rows,
            "b": self.slot,
            "side": match self.side { Side::Plain => "plain", Side::Tau => "tau" },
            "n": self.n(),
            "k": self.k(),
            "p": self.p(),
        })
    }
}

impl fmt::Display for FamilyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.side == Side::Tau {
            writeln!(f, "# flip side")?;
        }
        write!(f, "{}", matrix_text(&self.literal_rows(), self.slot))
    }
}

// ---------------------------------------------------------------------------
// Switchings, lattice paths, and initializers.

fn switch_word(i: usize) -> PositiveWord {
    if i == 1 {
        vec![3, 2, 4, 3, 1]
    } else {
        vec![2 * i + 1, 2 * i, 2 * i + 2, 2 * i + 1]
    }
}

/// Switching moves available on an interior-column word: clearing the
/// leading one, or exchanging a zero-one pair of adjacent interior columns.
/// Returned as (column index i of the move, resulting word).
fn middle_moves(word: &[bool]) -> Vec<(usize, Vec<bool>)> {
    let mut moves = Vec::new();
    if !word.is_empty() && word[0] {
        let mut next = word.to_vec();
        next[0] = false;
        moves.push((1, next));
    }
    for t in 0..word.len().saturating_sub(1) {
        if !word[t] && word[t + 1] {
            let mut next = word.to_vec();
            next.swap(t, t + 1);
            moves.push((t + 2, next));
        }
    }
    moves
}

impl FamilyElement {
    /// All switching conjugators available at this element, with their
    /// target matrices. Empty exactly on terminal elements.
    pub fn switchings(&self) -> Vec<(SimpleBraid, FamilyElement)> {
        assert!(self.m0, "switchings are defined on constrained-class elements");
        let n = self.n();
        let word = self.middle_word();
        middle_moves(&word)
            .into_iter()
            .map(|(i, next)| {
                let mut conj = SimpleBraid::from_word(n, &switch_word(i))
                    .expect("switching words are reduced");
                if self.side == Side::Tau {
                    conj = conj.tau();
                }
                let mut rows = self.rows.clone();
                for row in &mut rows {
                    for (t, &v) in next.iter().enumerate() {
                        row[t + 1] = v;
                    }
                }
                (conj, FamilyElement { rows, ..self.clone() })
            })
            .collect()
    }

    /// The unique positive braid composed of switching conjugators that
    /// takes the initial element of this element's lattice to the element
    /// itself. Path order does not matter: distant switchings commute.
    pub fn rho_path(&self) -> Result<Braid, FamilyError> {
        if !self.m0 {
            return Err(FamilyError::NotConstrained);
        }
        let n = self.n();
        let target = self.middle_word();
        let start = vec![true; target.len()];
        let mut parents: HashMap<Vec<bool>, (Vec<bool>, usize)> = HashMap::new();
        let mut queue = VecDeque::from([start.clone()]);
        while let Some(word) = queue.pop_front() {
            if word == target {
                break;
            }
            for (i, next) in middle_moves(&word) {
                if next != start && !parents.contains_key(&next) {
                    parents.insert(next.clone(), (word.clone(), i));
                    queue.push_back(next);
                }
            }
        }
        let mut moves = Vec::new();
        let mut at = target;
        while at != start {
            let (prev, i) = parents
                .get(&at)
                .expect("every interior word is reachable from the initial one")
                .clone();
            moves.push(i);
            at = prev;
        }
        moves.reverse();
        let mut rho = Braid::identity(n);
        for i in moves {
            let mut conj = SimpleBraid::from_word(n, &switch_word(i)).expect("reduced word");
            if self.side == Side::Tau {
                conj = conj.tau();
            }
            rho = rho.multiply(&Braid::from_simple(conj));
        }
        Ok(rho)
    }

    /// The unique long add-tail conjugator of a terminal element, together
    /// with its target: the flip image of the inverse-cycled initial
    /// element, on the opposite side.
    pub fn initializer(&self) -> Result<(SimpleBraid, FamilyElement), FamilyError> {
        if !self.is_terminal() {
            return Err(FamilyError::NotTerminal);
        }
        let plain = FamilyElement { side: Side::Plain, ..self.clone() };
        let rho_a = plain.rho_path()?;
        let last = Braid::from_simple(alpha_row(self.rows.last().unwrap(), self.slot));
        let prod = rho_a.multiply(&last);
        assert_eq!(
            (prod.inf(), prod.len()),
            (0, 1),
            "the lattice path times the last row must be a permutation braid"
        );
        let mut conj = prod.factors()[0].right_complement();
        if self.side == Side::Tau {
            conj = conj.tau();
        }
        let target = FamilyElement { side: self.side, ..plain.hat()? }.cycled_inv().tau();
        debug_assert_eq!(self.alpha().conjugate_by_simple(&conj), target.alpha());
        Ok((conj, target))
    }
}

/// Closed form of the lattice path from the initial to the terminal
/// element: blocks of switching conjugators with tops descending from
/// `2p-7` in steps of two. Independent of the matrix contents.
pub fn tail_path_closed_form(n: usize) -> Braid {
    let p = (n - 2) / 2;
    let mut rho = Braid::identity(n);
    let mut top = 2 * p as i64 - 7;
    while top >= 3 {
        for letter in (3..=top as usize).step_by(2) {
            let conj = SimpleBraid::from_word(n, &switch_word((letter - 1) / 2)).unwrap();
            rho = rho.multiply(&Braid::from_simple(conj));
        }
        top -= 2;
    }
    rho
}

/// The same braid written as the conjugate of a product of ascending runs;
/// used to cross-check the closed form.
pub fn tail_path_sigma_form(n: usize) -> Braid {
    let p = (n - 2) / 2;
    let mut word: Vec<i64> = vec![-1];
    for i in 4..p {
        word.extend(3..=2 * (p - i) as i64 + 2);
        word.extend(1..=2 * (p - i) as i64 + 1);
    }
    word.push(1);
    Braid::normal_form(n, &word).expect("letters in range")
}

// ---------------------------------------------------------------------------
// Forced prefixes.

pub(crate) fn run(from: usize, to: usize) -> PositiveWord {
    if from <= to {
        (from..=to).collect()
    } else {
        (to..=from).rev().collect()
    }
}

fn add_tail_words_even(a: &[bool], seed: usize, out: &mut Vec<PositiveWord>, seen: &mut HashSet<usize>) {
    let p = a.len();
    if seed % 2 == 0 || seed < 3 || seed > 2 * p - 1 || !seen.insert(seed) {
        return;
    }
    let i = (seed - 1) / 2;
    let cycle = theta(a);
    let mut found = false;
    if !a[i - 1] && a[i] {
        out.push(vec![seed, seed - 1, seed + 1, seed]);
        found = true;
    }
    if !a[i] {
        let end = cycle.apply(2 * i + 2);
        let mut word = vec![seed];
        word.extend(run(2 * i + 3, end));
        out.push(word);
        found = true;
        if end != 2 * p + 1 {
            // The accumulation continues at the column after the next zero.
            add_tail_words_even(a, end + 1, out, seen);
        }
    }
    if a[i - 1] {
        let end = cycle.apply(2 * i);
        let mut word = vec![seed];
        word.extend(run(2 * i - 1, end));
        out.push(word);
        found = true;
        if end != 1 {
            add_tail_words_even(a, end - 1, out, seen);
        }
    }
    if !found {
        out.push(vec![seed]);
    }
}

fn lift_word(word: &[usize], v: usize) -> Option<PositiveWord> {
    // A letter at v-1 straddles the inserted strand and has no single-letter
    // image; the forced content up to that point survives as a word prefix.
    let lifted: PositiveWord = word
        .iter()
        .take_while(|&&l| l != v - 1)
        .map(|&l| if l >= v { l + 1 } else { l })
        .collect();
    (!lifted.is_empty()).then_some(lifted)
}

/// The cut-head transport word for one seed, or `None` when the seed forces
/// nothing. Runs stay contiguous between insertion-shifted anchors; the
/// extreme slots additionally drag the vertical strand into the run.
fn cut_head_word(a: &[bool], slot: Option<usize>, seed: usize) -> Option<PositiveWord> {
    let p = a.len();
    let cycle = theta(a);
    let phi = |l: usize| cycle.inverse(l);
    let v = slot.map(|b| 2 * b + 2);
    let sh = |i: usize| match v {
        Some(v) if i >= v => i + 1,
        _ => i,
    };
    let even_seed = match v {
        None => seed,
        Some(v) => {
            if slot == Some(p) && seed == 2 * p + 2 {
                // The vertical strand itself finishes the last descent here,
                // standing in for the top through strand.
                2 * p + 1
            } else if seed == v || (slot == Some(p) && seed == 2 * p + 1) {
                return None;
            } else if seed > v {
                seed - 1
            } else {
                seed
            }
        }
    };
    if even_seed == 1 {
        let bottom = if v == Some(2) { 2 } else { 3 };
        return Some(run(sh(phi(1)), bottom));
    }
    if even_seed == 2 * p + 1 {
        let to = if slot == Some(p) { 2 * p + 1 } else { sh(2 * p - 1) };
        return Some(run(sh(phi(2 * p + 1)), to));
    }
    if even_seed % 2 == 0 && even_seed <= 2 * p {
        let j = even_seed / 2;
        let s = sh(even_seed);
        if !a[j - 1] {
            let from = sh(phi(even_seed));
            let mut word = if from <= s - 2 { run(from, s - 2) } else { Vec::new() };
            word.push(s);
            word.push(s - 1);
            return Some(word);
        }
        let top = if j == p && slot == Some(p) { 2 * p + 2 } else { sh(phi(even_seed)) };
        let mut word = vec![s];
        word.extend(run(top, s + 1));
        return Some(word);
    }
    None
}

/// The words forced at `seed` for each transport direction. A cut-head
/// word divides every left divisor of the row braid whose right quotient
/// no longer finishes at `seed` — it is the meet of all such divisors.
/// Add-tail words accumulate on the conjugator itself and include the
/// chained continuation to the next zero or one column.
pub fn forced_prefixes(
    a: &[bool],
    slot: Option<usize>,
    seed: usize,
    mode: ConjugatorKind,
) -> Vec<PositiveWord> {
    let p = a.len();
    let mut words = Vec::new();
    match (mode, slot) {
        (ConjugatorKind::CutHead, slot) => {
            if let Some(word) = cut_head_word(a, slot, seed) {
                words.push(word);
            }
        }
        (ConjugatorKind::AddTail, None) => {
            let mut seen = HashSet::new();
            add_tail_words_even(a, seed, &mut words, &mut seen);
        }
        (ConjugatorKind::AddTail, Some(b)) => {
            let v = 2 * b + 2;
            if seed == v - 1 && b >= 1 {
                if !a[b - 1] {
                    words.push(vec![v - 1, v - 2]);
                } else {
                    let mut word = vec![v - 1];
                    word.extend(run(2 * b - 1, theta(a).apply(2 * b)));
                    words.push(word);
                }
            } else if seed == v && b + 1 <= p {
                if a[b] {
                    words.push(vec![v, v + 1]);
                } else {
                    let mut word = vec![v];
                    let end = theta(a).apply(2 * b + 2);
                    word.extend(run(2 * b + 4, if end >= v { end + 1 } else { end }));
                    words.push(word);
                }
            } else if seed != v && seed != v - 1 {
                let even_seed = if seed > v { seed - 1 } else { seed };
                for word in forced_prefixes(a, None, even_seed, mode) {
                    if let Some(lifted) = lift_word(&word, v) {
                        words.push(lifted);
                    }
                }
            }
        }
    }
    words.sort();
    words.dedup();
    words
}

/// Pruning hints for the generic minimal-conjugator search on a family
/// braid. Only seeds whose forced words agree across every row are kept:
/// the accumulation wraps around the block transport, so a row-uniform
/// forced word must divide the conjugator itself. Cut-head hints are left
/// empty — the cut-head rules constrain the transported conjugator one
/// block over, not the starting set of the conjugator being built, and the
/// cut-head interval is small enough to search unhinted.
pub fn search_hints(e: &FamilyElement) -> crate::search::SearchHints {
    let n = e.n();
    let mut add_tail = Vec::new();
    for seed in 1..n {
        let per_row: Vec<Vec<PositiveWord>> = e
            .rows
            .iter()
            .map(|r| forced_prefixes(r, e.slot, seed, ConjugatorKind::AddTail))
            .collect();
        if per_row[0].is_empty() || per_row.iter().any(|w| *w != per_row[0]) {
            continue;
        }
        for word in &per_row[0] {
            let mut forced = SimpleBraid::from_word(n, word).expect("forced words are reduced");
            let mut s = seed;
            if e.side == Side::Tau {
                forced = forced.tau();
                s = n - s;
            }
            add_tail.push((s, forced));
        }
    }
    crate::search::SearchHints { cut_head: Vec::new(), add_tail }
}

// ---------------------------------------------------------------------------
// The rigid conjugacy graph from the closed-form generators.

/// Expected size of the rigid conjugacy set: `k` cyclings times `2^(p-4)`
/// interior words times two sides.
pub fn predicted_size(k: usize, p: usize) -> u64 {
    (k as u64) << (p - 3)
}

/// Closure of the element's braid under cycling, switchings, and
/// initializers. Every edge is verified by conjugation; nodes are
/// deduplicated by normal form, which also merges the two sides when the
/// width is small enough for them to overlap.
pub fn family_rigid_graph(e: &FamilyElement) -> Result<ConjugacyGraph, FamilyError> {
    if !e.m0 {
        return Err(FamilyError::NotConstrained);
    }
    let mut graph = ConjugacyGraph::new(e.n());
    let mut queue = VecDeque::from([e.clone()]);
    let mut visited = HashSet::new();
    while let Some(elem) = queue.pop_front() {
        let x = elem.alpha();
        if !visited.insert(x.key()) {
            continue;
        }
        assert!(x.is_rigid(), "family braids must stay rigid across the closure");
        let src = graph.insert_node(x.clone());
        let mut moves: Vec<(SimpleBraid, FamilyElement, ConjugatorKind)> = Vec::new();
        moves.push((x.factors()[0].clone(), elem.cycled(), ConjugatorKind::CutHead));
        for (conj, target) in elem.switchings() {
            moves.push((conj, target, ConjugatorKind::AddTail));
        }
        if elem.is_terminal() {
            let (conj, target) = elem.initializer()?;
            moves.push((conj, target, ConjugatorKind::AddTail));
        }
        for (conj, target, kind) in moves {
            let y = target.alpha();
            assert_eq!(
                x.conjugate_by_simple(&conj),
                y,
                "closed-form edge failed its conjugation check"
            );
            let dst = graph.insert_node(y);
            graph.add_edge(GraphEdge { src, dst, conjugator: conj, kind });
            queue.push_back(target);
        }
    }
    graph.sort_edges();
    debug_assert!(graph.verify_edges());
    Ok(graph)
}

// ---------------------------------------------------------------------------
// Recognition.

fn row_from_simple(s: &SimpleBraid) -> Option<(BitRow, Option<usize>)> {
    let (even, slot) = if s.n() % 2 == 1 {
        let fixed: Vec<usize> = (1..=s.n()).filter(|&x| s.map(x) == x).collect();
        let [v] = fixed.as_slice() else { return None };
        if v % 2 != 0 {
            return None;
        }
        (remove_strand(s, *v), Some(v / 2 - 1))
    } else {
        (s.clone(), None)
    };
    let p = even.n().checked_sub(2)? / 2;
    if p < 2 {
        return None;
    }
    let mut row = Vec::with_capacity(p);
    for i in 1..=p {
        if even.map(2 * i) == 2 * i + 1 {
            row.push(true);
        } else if even.map(2 * i + 1) == 2 * i {
            row.push(false);
        } else {
            return None;
        }
    }
    (alpha_row(&row, slot) == *s).then_some((row, slot))
}

/// Recover the matrix element of a braid, trying the plain orientation
/// first and its flip second. Rebuilds the braid from the candidate matrix
/// and accepts only on exact match, so recognition doubles as an
/// injectivity check.
pub fn parse_family_braid(x: &Braid) -> Option<FamilyElement> {
    fn plain(x: &Braid) -> Option<FamilyElement> {
        if x.inf() != 0 || x.is_empty() {
            return None;
        }
        let parsed: Option<Vec<(BitRow, Option<usize>)>> =
            x.factors().iter().map(row_from_simple).collect();
        let parsed = parsed?;
        let slot = parsed[0].1;
        if parsed.iter().any(|(_, s)| *s != slot) {
            return None;
        }
        let rows: Vec<BitRow> = parsed.into_iter().map(|(r, _)| r).collect();
        make_element(rows, slot, false).ok()
    }
    // A flipped braid also parses in plain orientation (as the literal
    // reversed-negated matrix), so prefer whichever orientation lands in
    // the constrained class, and plain on a tie.
    let a = plain(x);
    let b = plain(&x.tau()).map(|e| FamilyElement { side: Side::Tau, ..e });
    match (&a, &b) {
        (Some(e), _) if e.m0 => a,
        (_, Some(e)) if e.m0 => b,
        _ => a.or(b),
    }
}

// ---------------------------------------------------------------------------
// Matrix text format.

/// One row per line, characters 0/1, with an optional `|` marking the slot.
pub fn parse_matrix_text(text: &str) -> Result<(Vec<BitRow>, Option<usize>), FamilyError> {
    let mut rows = Vec::new();
    let mut slot: Option<Option<usize>> = None;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        let mut bar = None;
        for ch in line.chars() {
            match ch {
                '0' => row.push(false),
                '1' => row.push(true),
                '|' => {
                    if bar.replace(row.len()).is_some() {
                        return Err(FamilyError::Parse("more than one | in a row".into()));
                    }
                }
                c if c.is_whitespace() => {}
                c => return Err(FamilyError::Parse(format!("unexpected character {c:?}"))),
            }
        }
        match slot {
            None => slot = Some(bar),
            Some(prev) if prev != bar => {
                return Err(FamilyError::Parse("rows disagree on the | position".into()))
            }
            _ => {}
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(FamilyError::Parse("no rows".into()));
    }
    Ok((rows, slot.unwrap_or(None)))
}

pub fn matrix_text(rows: &[BitRow], slot: Option<usize>) -> String {
    let mut out = String::new();
    for row in rows {
        for (i, &x) in row.iter().enumerate() {
            if slot == Some(i) {
                out.push('|');
            }
            out.push(if x { '1' } else { '0' });
        }
        if slot == Some(row.len()) {
            out.push('|');
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugacy;

    fn bits(s: &str) -> BitRow {
        s.chars().map(|c| c == '1').collect()
    }

    fn example_element() -> FamilyElement {
        make_element(vec![bits("0101101"), bits("0101011")], Some(5), true).unwrap()
    }

    #[test]
    fn reduced_cycle_examples() {
        let c = theta(&bits("011001"));
        assert_eq!(c.cycle_from(2), vec![2, 8, 10, 13, 12, 6, 4, 1]);
        assert!(c.is_full_cycle());

        let c = theta(&bits("01"));
        assert_eq!(c.cycle_from(1), vec![1, 2, 5, 4]);
        assert_eq!(c.inverse(2), 1);
    }

    #[test]
    fn row_braid_examples() {
        let s = alpha_row(&bits("011001"), None);
        assert_eq!(s.images(), vec![3, 9, 2, 5, 1, 7, 4, 11, 8, 14, 10, 13, 6, 12]);
        assert_eq!(s.inversions(), 25);

        let s = alpha_row(&bits("01"), None);
        assert_eq!(s.images(), vec![3, 6, 2, 5, 1, 4]);
        assert_eq!(s.inversions(), 9);
        assert_eq!(s.starting_set().into_iter().collect::<Vec<_>>(), vec![2, 4]);
        assert_eq!(
            s.finishing_set().into_iter().collect::<Vec<_>>(),
            vec![1, 2, 4, 5]
        );
    }

    #[test]
    fn row_braid_with_vertical_strand() {
        let s = alpha_row(&bits("01"), Some(1));
        assert_eq!(s.n(), 7);
        assert_eq!(s.map(4), 4);
        // The fixed strand is crossed once by every trajectory spanning the
        // slot; here two trajectories span it.
        assert_eq!(s.inversions(), 9 + 2);
        // Starting set shifts across the inserted strand.
        assert_eq!(s.starting_set().into_iter().collect::<Vec<_>>(), vec![2, 5]);
    }

    #[test]
    fn element_validation() {
        assert!(example_element().is_m0());
        assert_eq!(
            make_element(vec![bits("01"), bits("01")], None, true),
            Err(FamilyError::NotM0("width below 4 leaves no room for the pair columns".into()))
        );
        let abab = vec![bits("0101"), bits("0011"), bits("0101"), bits("0011")];
        assert_eq!(
            make_element(abab, None, true),
            Err(FamilyError::NotM0("row-cycling order must equal the row count".into()))
        );
        assert_eq!(
            make_element(vec![bits("11")], None, false),
            Err(FamilyError::BadBoundaryColumns { p: 2 })
        );
        assert_eq!(
            make_element(vec![bits("01")], Some(5), false),
            Err(FamilyError::BadSlot { b: 5, p: 2 })
        );
    }

    #[test]
    fn element_braid_shape() {
        let e = example_element();
        assert_eq!((e.n(), e.k(), e.p()), (17, 2, 7));
        let x = e.alpha();
        assert_eq!((x.inf(), x.len()), (0, 2));
        assert!(x.is_rigid());
    }

    #[test]
    fn cycling_commutes_with_the_construction() {
        let e = example_element();
        let (cycled, conj) = conjugacy::cycling(&e.alpha()).unwrap();
        assert_eq!(cycled, e.cycled().alpha());
        assert_eq!(conj, e.alpha().factors()[0]);
    }

    #[test]
    fn flip_is_an_involution_matching_the_braid_flip() {
        let e = example_element();
        assert_eq!(e.tau().tau(), e);
        assert_eq!(e.tau().alpha(), e.alpha().tau());
        let lit = e.tau().literal_rows();
        assert_eq!(lit[0], bits("0100101"));
    }

    #[test]
    fn hat_and_check_match_the_worked_example() {
        let e = example_element();
        assert_eq!(e.hat().unwrap().rows(), &[bits("0111101"), bits("0111011")]);
        assert_eq!(e.check().unwrap().rows(), &[bits("0000101"), bits("0000011")]);
        assert!(e.check().unwrap().is_terminal());
        assert!(!e.is_terminal());
    }

    #[test]
    fn switchings_of_the_worked_example() {
        let e = example_element();
        let moves = e.switchings();
        let words: Vec<Vec<usize>> = moves
            .iter()
            .map(|(c, _)| c.canonical_word())
            .collect();
        assert!(words.contains(&SimpleBraid::from_word(17, &[3, 2, 4, 3, 1]).unwrap().canonical_word()));
        assert!(words.contains(&SimpleBraid::from_word(17, &[7, 6, 8, 7]).unwrap().canonical_word()));
        assert_eq!(moves.len(), 2);
        for (conj, target) in moves {
            assert_eq!(e.alpha().conjugate_by_simple(&conj), target.alpha());
        }
        assert!(e.check().unwrap().switchings().is_empty());
    }

    #[test]
    fn lattice_path_of_the_worked_example() {
        let e = example_element();
        let rho = e.rho_path().unwrap();
        let by_hand = Braid::normal_form(17, &[3, 2, 4, 3, 1, 5, 4, 6, 5]).unwrap();
        assert_eq!(rho, by_hand);
        assert_eq!(
            e.hat().unwrap().alpha().conjugate_with(&rho),
            e.alpha()
        );
        assert!(e.hat().unwrap().rho_path().unwrap().is_identity());
    }

    #[test]
    fn closed_form_tail_path() {
        for n in [14, 15, 16, 18] {
            let closed = tail_path_closed_form(n);
            let sigma = tail_path_sigma_form(n);
            assert_eq!(closed, sigma);
            let p = (n - 2) / 2;
            let expected: Vec<usize> = (3..=2 * p - 7).step_by(2).collect();
            assert_eq!(closed.starting_set().into_iter().collect::<Vec<_>>(), expected);
        }
        assert!(tail_path_closed_form(10).is_identity());
    }

    #[test]
    fn initializer_on_a_small_terminal_element() {
        let e = make_element(vec![bits("0101"), bits("0011")], None, true).unwrap();
        assert!(e.is_terminal());
        let (conj, target) = e.initializer().unwrap();
        assert_eq!(
            conj,
            alpha_row(&bits("0011"), None).right_complement()
        );
        assert_eq!(target.side(), Side::Tau);
        assert_eq!(e.alpha().conjugate_by_simple(&conj), target.alpha());
    }

    #[test]
    fn forced_prefix_words() {
        let a = bits("0101101");
        assert_eq!(
            forced_prefixes(&a, None, 3, ConjugatorKind::AddTail),
            vec![vec![3, 2, 4, 3]]
        );
        let words = forced_prefixes(&a, None, 5, ConjugatorKind::AddTail);
        assert!(words.contains(&vec![5, 3, 2, 1]));
        assert!(words.contains(&vec![5, 7, 8, 9, 10, 11, 12]));
        assert!(words.contains(&vec![13, 12, 14, 13]));

        let a = bits("01");
        assert_eq!(
            forced_prefixes(&a, None, 2, ConjugatorKind::CutHead),
            vec![vec![2, 1]]
        );
        assert_eq!(
            forced_prefixes(&a, None, 1, ConjugatorKind::CutHead),
            vec![vec![4, 3]]
        );
        assert_eq!(
            forced_prefixes(&a, None, 4, ConjugatorKind::CutHead),
            vec![vec![4, 5]]
        );
        assert_eq!(
            forced_prefixes(&a, None, 5, ConjugatorKind::CutHead),
            vec![vec![2, 3]]
        );

        // The last insertion slot reroutes the top seeds through the
        // vertical strand.
        let a = bits("0101");
        assert_eq!(
            forced_prefixes(&a, Some(4), 4, ConjugatorKind::CutHead),
            vec![vec![4, 8, 7, 6, 5]]
        );
        assert_eq!(
            forced_prefixes(&a, Some(4), 8, ConjugatorKind::CutHead),
            vec![vec![8, 10, 9]]
        );
        assert_eq!(
            forced_prefixes(&a, Some(4), 10, ConjugatorKind::CutHead),
            vec![vec![6, 7, 8, 9]]
        );
        assert!(forced_prefixes(&a, Some(4), 9, ConjugatorKind::CutHead).is_empty());
    }

    #[test]
    fn recognition_round_trip() {
        let e = example_element();
        assert_eq!(parse_family_braid(&e.alpha()), Some(e.clone()));
        let t = e.tau();
        assert_eq!(parse_family_braid(&t.alpha()), Some(t));
        assert_eq!(parse_family_braid(&Braid::delta_power(6, 2)), None);
    }

    #[test]
    fn matrix_text_round_trip() {
        let text = "01011|01\n01010|11\n";
        let (rows, slot) = parse_matrix_text(text).unwrap();
        assert_eq!(slot, Some(5));
        assert_eq!(matrix_text(&rows, slot), text);
        assert!(parse_matrix_text("0102").is_err());
    }

    #[test]
    fn small_graph_counts() {
        let e = make_element(vec![bits("011011"), bits("011101")], None, true).unwrap();
        let graph = family_rigid_graph(&e).unwrap();
        assert_eq!(graph.nodes().len() as u64, predicted_size(2, 6));
        assert!(graph.is_strongly_connected());
        for node in graph.nodes() {
            let parsed = parse_family_braid(node).expect("node recognizable");
            assert!(parsed.is_m0());
        }
    }
}
