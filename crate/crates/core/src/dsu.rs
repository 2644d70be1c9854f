//! Disjoint-set forest with union by size and path compression.

#[derive(Clone, Debug)]
pub struct DisjointSets {
    parents: Vec<usize>,
    sizes: Vec<usize>,
}

impl DisjointSets {
    pub fn new(len: usize) -> Self {
        Self {
            parents: (0..len).collect(),
            sizes: vec![1; len],
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.parents.len()
    }

    /// Appends a fresh singleton set and returns its index.
    pub fn push(&mut self) -> usize {
        let id = self.parents.len();
        self.parents.push(id);
        self.sizes.push(1);
        id
    }

    pub fn find(&mut self, mut i: usize) -> usize {
        let mut root = i;
        while self.parents[root] != root {
            root = self.parents[root];
        }
        while i != root {
            let next = self.parents[i];
            self.parents[i] = root;
            i = next;
        }
        root
    }

    /// Merges the sets containing `i` and `j`; returns the new root, or
    /// `None` if they were already joined.
    pub fn union(&mut self, i: usize, j: usize) -> Option<usize> {
        let (mut a, mut b) = (self.find(i), self.find(j));
        if a == b {
            return None;
        }
        if self.sizes[a] < self.sizes[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parents[b] = a;
        self.sizes[a] += self.sizes[b];
        Some(a)
    }

    #[cfg(test)]
    pub fn set_size(&mut self, i: usize) -> usize {
        let r = self.find(i);
        self.sizes[r]
    }
}
