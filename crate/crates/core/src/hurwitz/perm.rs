//! Small permutations in one-line form over `{0, .., n-1}`, `n <= MAX_DEGREE`.

use std::fmt;

pub const MAX_DEGREE: usize = 8;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    n: u8,
    img: [u8; MAX_DEGREE],
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_DEGREE);
        let mut img = [0u8; MAX_DEGREE];
        for (i, x) in img.iter_mut().enumerate() {
            *x = i as u8;
        }
        Perm { n: n as u8, img }
    }

    pub fn from_images(images: &[usize]) -> Option<Self> {
        let n = images.len();
        if n > MAX_DEGREE {
            return None;
        }
        let mut seen = [false; MAX_DEGREE];
        let mut p = Perm::identity(n);
        for (i, &x) in images.iter().enumerate() {
            if x >= n || seen[x] {
                return None;
            }
            seen[x] = true;
            p.img[i] = x as u8;
        }
        Some(p)
    }

    pub fn degree(&self) -> usize {
        self.n as usize
    }

    pub fn apply(&self, i: usize) -> usize {
        self.img[i] as usize
    }

    /// `self` first, then `other`: `(self.then(other))(i) = other(self(i))`.
    pub fn then(&self, other: &Perm) -> Perm {
        let mut out = *self;
        for i in 0..self.degree() {
            out.img[i] = other.img[self.img[i] as usize];
        }
        out
    }

    pub fn inverse(&self) -> Perm {
        let mut out = *self;
        for i in 0..self.degree() {
            out.img[self.img[i] as usize] = i as u8;
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        (0..self.degree()).all(|i| self.img[i] as usize == i)
    }

    /// Commutator `a b a^-1 b^-1`, composed left to right.
    pub fn commutator(a: &Perm, b: &Perm) -> Perm {
        a.then(b).then(&a.inverse()).then(&b.inverse())
    }

    /// Cycle lengths sorted in decreasing order.
    pub fn cycle_type(&self) -> Vec<u32> {
        let n = self.degree();
        let mut seen = [false; MAX_DEGREE];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.img[i] as usize;
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    pub fn commutes_with(&self, other: &Perm) -> bool {
        self.then(other) == other.then(self)
    }

    /// All permutations of `{0..n-1}` in lexicographic order.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Perm::from_images(&cur).expect("valid"));
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("exists");
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.img[..self.degree()])
    }
}

/// Set partition of `{0..n-1}` stored as restricted-growth block labels.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Blocks {
    n: u8,
    label: [u8; MAX_DEGREE],
}

impl Blocks {
    pub fn discrete(n: usize) -> Self {
        let mut label = [0u8; MAX_DEGREE];
        for (i, x) in label.iter_mut().enumerate().take(n) {
            *x = i as u8;
        }
        Blocks { n: n as u8, label }
    }

    /// Orbits of the cyclic group generated by `p`.
    pub fn orbits(p: &Perm) -> Self {
        let mut b = Blocks::discrete(p.degree());
        b.absorb(p);
        b
    }

    /// Coarsest common refinement-join with the orbits of `p`.
    pub fn absorb(&mut self, p: &Perm) {
        for i in 0..self.n as usize {
            let j = p.apply(i);
            self.merge(i, j);
        }
    }

    pub fn join(&self, other: &Blocks) -> Blocks {
        let mut out = *self;
        for i in 0..self.n as usize {
            for j in 0..self.n as usize {
                if other.label[i] == other.label[j] {
                    out.merge(i, j);
                }
            }
        }
        out
    }

    fn merge(&mut self, i: usize, j: usize) {
        let (a, b) = (self.label[i], self.label[j]);
        if a == b {
            return;
        }
        let (keep, drop) = if a < b { (a, b) } else { (b, a) };
        for x in self.label.iter_mut().take(self.n as usize) {
            if *x == drop {
                *x = keep;
            }
        }
        self.normalize();
    }

    fn normalize(&mut self) {
        let mut map = [u8::MAX; MAX_DEGREE];
        let mut next = 0u8;
        for i in 0..self.n as usize {
            let l = self.label[i] as usize;
            if map[l] == u8::MAX {
                map[l] = next;
                next += 1;
            }
            self.label[i] = map[l];
        }
    }

    pub fn is_single(&self) -> bool {
        (0..self.n as usize).all(|i| self.label[i] == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        assert_eq!(Perm::all(4).len(), 24);
        let p = Perm::from_images(&[1, 2, 0, 3]).unwrap();
        assert_eq!(p.cycle_type(), vec![3, 1]);
        assert!(p.then(&p.inverse()).is_identity());
        assert!(Perm::from_images(&[0, 0]).is_none());
        let q = Perm::from_images(&[1, 0, 2, 3]).unwrap();
        assert_eq!(p.then(&q).apply(0), q.apply(p.apply(0)));
        assert!(!Blocks::orbits(&p).is_single());
        assert!(Blocks::orbits(&p).join(&Blocks::orbits(&Perm::from_images(&[0, 1, 3, 2]).unwrap())).is_single());
        assert!(!Blocks::orbits(&p).join(&Blocks::discrete(4)).is_single());
        let mut b = Blocks::orbits(&p);
        b.absorb(&Perm::from_images(&[3, 1, 2, 0]).unwrap());
        assert!(b.is_single());
    }
}
