use crate::formula::Var;

use super::GadgetError;

/// A contiguous id range handed out under a tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AllocatedBlock {
    pub tag: String,
    pub first: u32,
    pub len: u32,
}

impl AllocatedBlock {
    pub fn last(&self) -> u32 {
        self.first + self.len - 1
    }

    pub fn contains(&self, id: u32) -> bool {
        self.len > 0 && id >= self.first && id <= self.last()
    }

    fn overlaps(&self, first: u32, len: u32) -> bool {
        len > 0 && self.len > 0 && first <= self.last() && self.first < first + len
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        (self.first..self.first + self.len).map(Var::new)
    }
}

/// Hands out variable ids that were never handed out before. Explicit
/// reservations may be placed anywhere; later `fresh` calls skip them.
#[derive(Clone, Debug)]
pub struct FreshVarAllocator {
    base: u32,
    next: u32,
    blocks: Vec<AllocatedBlock>,
}

impl Default for FreshVarAllocator {
    fn default() -> Self {
        FreshVarAllocator::new()
    }
}

impl FreshVarAllocator {
    pub fn new() -> FreshVarAllocator {
        FreshVarAllocator::after(0)
    }

    /// Allocator whose first fresh id is `n_vars + 1`.
    pub fn after(n_vars: u32) -> FreshVarAllocator {
        FreshVarAllocator {
            base: n_vars + 1,
            next: n_vars + 1,
            blocks: Vec::new(),
        }
    }

    pub fn fresh(&mut self, tag: impl Into<String>, len: u32) -> Vec<Var> {
        let mut first = self.next;
        while let Some(b) = self.blocks.iter().find(|b| b.overlaps(first, len)) {
            first = b.last() + 1;
        }
        self.next = first + len;
        self.push(tag.into(), first, len)
    }

    pub fn fresh_one(&mut self, tag: impl Into<String>) -> Var {
        self.fresh(tag, 1)[0]
    }

    /// Claims exactly `first..first + len`.
    pub fn reserve(
        &mut self,
        tag: impl Into<String>,
        first: u32,
        len: u32,
    ) -> Result<Vec<Var>, GadgetError> {
        let tag = tag.into();
        if first < self.base {
            return Err(GadgetError::RangeOverlap {
                tag,
                first,
                len,
                other: "caller-owned ids".into(),
            });
        }
        if let Some(b) = self.blocks.iter().find(|b| b.overlaps(first, len)) {
            return Err(GadgetError::RangeOverlap {
                tag,
                first,
                len,
                other: b.tag.clone(),
            });
        }
        Ok(self.push(tag, first, len))
    }

    fn push(&mut self, tag: String, first: u32, len: u32) -> Vec<Var> {
        let block = AllocatedBlock { tag, first, len };
        let vars = block.vars().collect();
        self.blocks.push(block);
        vars
    }

    /// Largest id handed out so far, or the id below the first fresh one.
    pub fn high_water(&self) -> u32 {
        self.blocks
            .iter()
            .filter(|b| b.len > 0)
            .map(AllocatedBlock::last)
            .fold(self.next - 1, u32::max)
    }

    pub fn blocks(&self) -> &[AllocatedBlock] {
        &self.blocks
    }

    pub fn total_allocated(&self) -> u64 {
        self.blocks.iter().map(|b| u64::from(b.len)).sum()
    }

    /// Checks that no two blocks share an id.
    pub fn audit(&self) -> Result<(), GadgetError> {
        for (i, a) in self.blocks.iter().enumerate() {
            for b in &self.blocks[i + 1..] {
                if a.overlaps(b.first, b.len) {
                    return Err(GadgetError::RangeOverlap {
                        tag: b.tag.clone(),
                        first: b.first,
                        len: b.len,
                        other: a.tag.clone(),
                    });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_ids_are_sequential() {
        let mut a = FreshVarAllocator::after(10);
        assert_eq!(a.fresh("x", 2), vec![Var::new(11), Var::new(12)]);
        assert_eq!(a.fresh_one("y"), Var::new(13));
        assert_eq!(a.high_water(), 13);
        a.audit().unwrap();
    }

    #[test]
    fn fresh_skips_reservations() {
        let mut a = FreshVarAllocator::new();
        a.reserve("ports", 5, 3).unwrap();
        let ids: Vec<u32> = a.fresh("blk", 6).iter().map(|v| v.id()).collect();
        assert_eq!(ids, vec![8, 9, 10, 11, 12, 13]);
        let ids: Vec<u32> = a.fresh("small", 2).iter().map(|v| v.id()).collect();
        assert_eq!(ids, vec![14, 15]);
        a.audit().unwrap();
    }

    #[test]
    fn overlapping_reservation_rejected() {
        let mut a = FreshVarAllocator::new();
        a.fresh("blk", 4);
        assert!(a.reserve("late", 3, 2).is_err());
        assert!(a.reserve("ok", 20, 2).is_ok());
    }

    #[test]
    fn reservation_below_start_rejected() {
        let mut a = FreshVarAllocator::after(10);
        assert!(a.reserve("caller-owned", 4, 1).is_err());
    }
}
