use super::Group;

/// Additive model of the cyclic group `C_n`; element `a` stands for `g^a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicGroup {
    order: u64,
}

impl CyclicGroup {
    pub fn new(order: u64) -> Self {
        assert!(order >= 1, "cyclic group order must be positive");
        CyclicGroup { order }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn generator(&self) -> u64 {
        1 % self.order
    }

    pub fn element(&self, a: i128) -> u64 {
        a.rem_euclid(self.order as i128) as u64
    }
}

impl Group for CyclicGroup {
    type Elem = u64;

    fn identity(&self) -> u64 {
        0
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.order as u128) as u64
    }

    fn inv(&self, a: &u64) -> u64 {
        (self.order - a % self.order) % self.order
    }

    fn encode(&self, a: &u64) -> Vec<u8> {
        a.to_be_bytes().to_vec()
    }

    fn describe(&self, a: &u64) -> String {
        format!("g^{a}")
    }

    fn pow(&self, a: &u64, e: i64) -> u64 {
        self.element(*a as i128 * e as i128)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_arithmetic() {
        let c = CyclicGroup::new(27);
        assert_eq!(c.pow(&1, 18), 18);
        assert_eq!(c.mul(&20, &10), 3);
        assert_eq!(c.inv(&0), 0);
        assert_eq!(c.inv(&5), 22);
        assert_eq!(c.pow(&2, -1), 25);
        assert_eq!(c.commutator(&4, &9), 0);
    }
}
