use std::collections::BTreeMap;

use super::word::{Coef, FamilyLevels, Gen, Rapidity, Symbol, TensorWord};

/// Which of the two comultiplications, antipodes or shift morphisms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Direction {
    Plus,
    Minus,
}

impl Direction {
    pub fn step(self) -> i32 {
        match self {
            Direction::Plus => 1,
            Direction::Minus => -1,
        }
    }

    pub fn sign(self) -> &'static str {
        match self {
            Direction::Plus => "+",
            Direction::Minus => "-",
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MapError {
    #[error("slot {slot} is out of range for a {arity}-slot word")]
    Slot { slot: usize, arity: usize },
    #[error("slots {0} and {1} hold different algebras")]
    Mismatch(i32, i32),
    #[error("the counit does not reduce the coproduct of {0} to a single shifted generator: {1}")]
    NotAShift(String, String),
}

fn check_slot(word: &TensorWord, slot: usize) -> Result<(), MapError> {
    if slot < word.arity() {
        Ok(())
    } else {
        Err(MapError::Slot { slot, arity: word.arity() })
    }
}

/// Replace slot `slot` by the image of its product under a map given on
/// single symbols. `anti` reverses the product with the graded sign.
fn map_slot(
    word: &TensorWord,
    slot: usize,
    image_slots: &[i32],
    image: impl Fn(&Symbol) -> TensorWord,
    anti: bool,
) -> Result<TensorWord, MapError> {
    check_slot(word, slot)?;
    let s = slot as u8;
    let before_slots = word.slots[..slot].to_vec();
    let after_slots = word.slots[slot + 1..].to_vec();
    let mut slots = before_slots.clone();
    slots.extend_from_slice(image_slots);
    slots.extend_from_slice(&after_slots);
    let mut out = TensorWord::zero(slots);
    for t in &word.terms {
        let before: Vec<Symbol> = t.syms.iter().filter(|x| x.slot < s).copied().collect();
        let at: Vec<Symbol> = t.syms.iter().filter(|x| x.slot == s).copied().collect();
        let after: Vec<Symbol> = t.syms.iter().filter(|x| x.slot > s).map(|x| x.in_slot(x.slot - s - 1)).collect();
        let mut mid = TensorWord::unit(image_slots.to_vec());
        let mut sign = 1;
        if anti {
            for (i, x) in at.iter().enumerate() {
                if x.odd() && at[i + 1..].iter().filter(|y| y.odd()).count() % 2 == 1 {
                    sign = -sign;
                }
            }
            for x in at.iter().rev() {
                mid = mid.mul(&image(x));
            }
        } else {
            for x in &at {
                mid = mid.mul(&image(x));
            }
        }
        let left = TensorWord::monomial(before_slots.clone(), t.coef.mul(&Coef::int(sign)), before);
        let right = TensorWord::monomial(after_slots.clone(), Coef::one(), after);
        out = out.add(left.tensor(&mid).tensor(&right));
    }
    Ok(out)
}

fn sym(gen: Gen, rap: Rapidity, quarters: i64, level: i32, slot: u8) -> Symbol {
    Symbol { slot, gen, rap: rap.shifted(quarters), inverse: false, level }
}

/// `Δ_n^±` on one symbol of level `n`, as a two-slot word over the target
/// levels `lo < hi`. Both comultiplications have the same table once written
/// in terms of `c_lo` and `c_hi`. Shifts are in units of `i*hbar/4`.
fn coproduct_symbol(dir: Direction, x: &Symbol, levels: &FamilyLevels) -> TensorWord {
    let (lo, hi) = match dir {
        Direction::Plus => (x.level, x.level + 1),
        Direction::Minus => (x.level - 1, x.level),
    };
    let (cl, ch) = (levels.at(lo), levels.at(hi));
    let r = x.rap;
    let two = |a: Symbol, b: Symbol| TensorWord::monomial(vec![lo, hi], Coef::one(), vec![a, b]);
    let one = |a: Symbol| TensorWord::monomial(vec![lo, hi], Coef::one(), vec![a]);
    let word = match x.gen {
        Gen::HPlus => two(sym(Gen::HPlus, r, ch, lo, 0), sym(Gen::HPlus, r, -cl, hi, 1)),
        Gen::HMinus => two(sym(Gen::HMinus, r, -ch, lo, 0), sym(Gen::HMinus, r, cl, hi, 1)),
        Gen::E => one(sym(Gen::E, r, 0, lo, 0)).add(two(sym(Gen::HMinus, r, cl, lo, 0), sym(Gen::E, r, 2 * cl, hi, 1))),
        Gen::F => one(sym(Gen::F, r, 0, hi, 1)).add(two(sym(Gen::F, r, 2 * ch, lo, 0), sym(Gen::HPlus, r, ch, hi, 1))),
    };
    if x.inverse {
        invert_factors(word)
    } else {
        word
    }
}

fn invert_factors(mut w: TensorWord) -> TensorWord {
    for t in &mut w.terms {
        for s in &mut t.syms {
            *s = s.inverted();
        }
    }
    w
}

/// Apply `Δ^±` to slot `slot`.
pub fn coproduct(dir: Direction, word: &TensorWord, slot: usize, levels: &FamilyLevels) -> Result<TensorWord, MapError> {
    check_slot(word, slot)?;
    let n = word.slots[slot];
    let targets = match dir {
        Direction::Plus => [n, n + 1],
        Direction::Minus => [n - 1, n],
    };
    map_slot(word, slot, &targets, |x| coproduct_symbol(dir, x, levels), false)
}

/// Apply the counit to slot `slot`, removing it.
pub fn counit(word: &TensorWord, slot: usize) -> Result<TensorWord, MapError> {
    map_slot(
        word,
        slot,
        &[],
        |x| match x.gen {
            Gen::E | Gen::F => TensorWord::zero(Vec::new()),
            Gen::HPlus | Gen::HMinus => TensorWord::unit(Vec::new()),
        },
        false,
    )
}

fn antipode_symbol(dir: Direction, x: &Symbol, levels: &FamilyLevels) -> TensorWord {
    let m = x.level + dir.step();
    let c = levels.at(m);
    let r = x.rap;
    let slots = vec![m];
    match x.gen {
        Gen::HPlus | Gen::HMinus => {
            TensorWord::monomial(slots, Coef::one(), vec![Symbol { slot: 0, gen: x.gen, rap: r, inverse: !x.inverse, level: m }])
        }
        Gen::E => TensorWord::monomial(
            slots,
            Coef::int(-1),
            vec![sym(Gen::HMinus, r, -c, m, 0).inverted(), sym(Gen::E, r, -2 * c, m, 0)],
        ),
        Gen::F => TensorWord::monomial(
            slots,
            Coef::int(-1),
            vec![sym(Gen::F, r, -2 * c, m, 0), sym(Gen::HPlus, r, -c, m, 0).inverted()],
        ),
    }
}

/// Apply the antipode `S^±` to slot `slot`, as an anti-homomorphism.
pub fn antipode(dir: Direction, word: &TensorWord, slot: usize, levels: &FamilyLevels) -> Result<TensorWord, MapError> {
    check_slot(word, slot)?;
    let m = word.slots[slot] + dir.step();
    map_slot(word, slot, &[m], |x| antipode_symbol(dir, x, levels), true)
}

/// The multiplication of slots `slot` and `slot + 1`.
pub fn merge_slots(word: &TensorWord, slot: usize) -> Result<TensorWord, MapError> {
    check_slot(word, slot + 1)?;
    let (a, b) = (word.slots[slot], word.slots[slot + 1]);
    if a != b {
        return Err(MapError::Mismatch(a, b));
    }
    let mut slots = word.slots.clone();
    slots.remove(slot + 1);
    let s = slot as u8;
    let terms = word
        .terms
        .iter()
        .map(|t| {
            let syms = t.syms.iter().map(|x| if x.slot > s { x.in_slot(x.slot - 1) } else { *x }).collect();
            super::word::Term { coef: t.coef.clone(), syms }
        })
        .collect();
    Ok(TensorWord { slots, terms })
}

/// `τ_n^±` on each generator as (rapidity shift in quarters, target level),
/// read off from `(ε ⊗ id) Δ_n^+` and `(id ⊗ ε) Δ_n^-`.
pub fn tau_table(dir: Direction, n: i32, levels: &FamilyLevels) -> Result<BTreeMap<Gen, (i64, i32)>, MapError> {
    let mut table = BTreeMap::new();
    for g in Gen::ALL {
        let x = Symbol::new(g, Rapidity::var(0), n);
        let d = coproduct(dir, &TensorWord::generator(x), 0, levels)?;
        let reduced = match dir {
            Direction::Plus => counit(&d, 0)?,
            Direction::Minus => counit(&d, 1)?,
        };
        let live: Vec<_> = reduced.terms.iter().filter(|t| !t.coef.is_zero()).collect();
        match live.as_slice() {
            [t] if t.coef == Coef::one() && t.syms.len() == 1 && t.syms[0].gen == g && !t.syms[0].inverse => {
                let s = t.syms[0];
                table.insert(g, (s.rap.quarters, s.level));
            }
            _ => return Err(MapError::NotAShift(g.name().into(), reduced.to_string())),
        }
    }
    Ok(table)
}

/// Apply `τ^±` to slot `slot`.
pub fn shift(dir: Direction, word: &TensorWord, slot: usize, levels: &FamilyLevels) -> Result<TensorWord, MapError> {
    check_slot(word, slot)?;
    let n = word.slots[slot];
    let table = tau_table(dir, n, levels)?;
    let target = n + dir.step();
    map_slot(
        word,
        slot,
        &[target],
        |x| {
            let (q, level) = table[&x.gen];
            TensorWord::generator(Symbol { slot: 0, gen: x.gen, rap: x.rap.shifted(q), inverse: x.inverse, level })
        },
        false,
    )
}
