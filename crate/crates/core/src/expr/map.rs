use super::{ExprError, MultiPoly, Ring};

/// Ring homomorphism given by the image of each source variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMap {
    source: Ring,
    target: Ring,
    images: Vec<MultiPoly>,
}

impl PolyMap {
    pub fn new(source: Ring, target: Ring, images: Vec<MultiPoly>) -> Result<PolyMap, ExprError> {
        if images.len() != source.len() {
            return Err(ExprError::PointLength {
                expected: source.len(),
                got: images.len(),
            });
        }
        if let Some(bad) = images.iter().find(|p| *p.ring() != target) {
            return Err(ExprError::RingMismatch {
                left: target.vars().to_vec(),
                right: bad.ring().vars().to_vec(),
            });
        }
        Ok(PolyMap { source, target, images })
    }

    pub fn identity(ring: &Ring) -> PolyMap {
        let images = (0..ring.len()).map(|i| MultiPoly::var(ring, i)).collect();
        PolyMap {
            source: ring.clone(),
            target: ring.clone(),
            images,
        }
    }

    /// Endomorphism that swaps two variables.
    pub fn swap(ring: &Ring, a: usize, b: usize) -> PolyMap {
        let mut map = PolyMap::identity(ring);
        map.images.swap(a, b);
        map
    }

    /// Endomorphism fixing every variable except `var`, which is sent to
    /// `image`.
    pub fn replace(ring: &Ring, var: usize, image: MultiPoly) -> Result<PolyMap, ExprError> {
        let mut images: Vec<MultiPoly> = (0..ring.len()).map(|i| MultiPoly::var(ring, i)).collect();
        images[var] = image;
        PolyMap::new(ring.clone(), ring.clone(), images)
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn images(&self) -> &[MultiPoly] {
        &self.images
    }

    /// Homomorphic image of `p`.
    pub fn apply(&self, p: &MultiPoly) -> Result<MultiPoly, ExprError> {
        if *p.ring() != self.source {
            return Err(ExprError::RingMismatch {
                left: self.source.vars().to_vec(),
                right: p.ring().vars().to_vec(),
            });
        }
        // powers[i][e] = images[i]^e, filled lazily
        let mut powers: Vec<Vec<MultiPoly>> = self.images.iter().map(|_| vec![MultiPoly::one(&self.target)]).collect();
        let mut acc = MultiPoly::zero(&self.target);
        for (m, c) in p.terms() {
            let mut term = MultiPoly::constant(&self.target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap() * &self.images[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e];
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// `other ∘ self`: first apply `self`, then `other`.
    pub fn then(&self, other: &PolyMap) -> Result<PolyMap, ExprError> {
        let images = self
            .images
            .iter()
            .map(|img| other.apply(img))
            .collect::<Result<Vec<_>, _>>()?;
        PolyMap::new(self.source.clone(), other.target.clone(), images)
    }
}

/// Free-function form of [`PolyMap::apply`].
pub fn substitute(p: &MultiPoly, map: &PolyMap) -> Result<MultiPoly, ExprError> {
    map.apply(p)
}
