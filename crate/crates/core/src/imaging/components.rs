//! 8-connected component labeling.

use super::BinaryImage;

/// Label raster: 0 is background, components are 1..=count. Labels are
/// assigned in row-major order of each component's first pixel, so the
/// numbering is deterministic.
#[derive(Clone, Debug)]
pub struct LabelMap {
    width: usize,
    height: usize,
    labels: Vec<u32>,
    count: usize,
}

impl LabelMap {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u32 {
        debug_assert!(x < self.width && y < self.height);
        self.labels[y * self.width + x]
    }

    /// Pixel count per label, indexed by label - 1.
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.count];
        for &l in &self.labels {
            if l > 0 {
                sizes[(l - 1) as usize] += 1;
            }
        }
        sizes
    }

    /// Mask of one component.
    pub fn mask_of(&self, label: u32) -> BinaryImage {
        let mut out = BinaryImage::new(self.width, self.height);
        for y in 0..self.height {
            for x in 0..self.width {
                out.set(x, y, self.get(x, y) == label);
            }
        }
        out
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new() -> Self {
        Self { parent: vec![0] } // slot for the unused 0 label
    }

    fn make(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        id
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let up = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = up;
            x = up;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            // Smaller root wins so provisional ordering stays row-major.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// Two-pass 8-connectivity labeling. Every foreground pixel gets a label;
/// equal-size or disjoint components keep deterministic numbering.
pub fn connected_components(img: &BinaryImage) -> LabelMap {
    let (w, h) = (img.width(), img.height());
    let mut provisional = vec![0u32; w * h];
    let mut uf = UnionFind::new();

    for y in 0..h {
        for x in 0..w {
            if !img.get(x, y) {
                continue;
            }
            // Earlier neighbors under 8-connectivity: W, NW, N, NE.
            let mut neighbor = 0u32;
            let mut merge: [u32; 4] = [0; 4];
            let mut n_merge = 0;
            let offsets: [(isize, isize); 4] = [(-1, 0), (-1, -1), (0, -1), (1, -1)];
            for (dx, dy) in offsets {
                let nx = x as isize + dx;
                let ny = y as isize + dy;
                if nx < 0 || ny < 0 || nx >= w as isize {
                    continue;
                }
                let l = provisional[ny as usize * w + nx as usize];
                if l > 0 {
                    if neighbor == 0 {
                        neighbor = l;
                    }
                    merge[n_merge] = l;
                    n_merge += 1;
                }
            }
            if neighbor == 0 {
                provisional[y * w + x] = uf.make();
            } else {
                provisional[y * w + x] = neighbor;
                for &l in &merge[1..n_merge] {
                    uf.union(merge[0], l);
                }
            }
        }
    }

    // Renumber roots in order of first appearance (row-major scan).
    let mut remap = vec![0u32; uf.parent.len()];
    let mut labels = vec![0u32; w * h];
    let mut count = 0u32;
    for i in 0..w * h {
        let p = provisional[i];
        if p == 0 {
            continue;
        }
        let root = uf.find(p);
        if remap[root as usize] == 0 {
            count += 1;
            remap[root as usize] = count;
        }
        labels[i] = remap[root as usize];
    }

    LabelMap { width: w, height: h, labels, count: count as usize }
}

/// Mask of the largest component; ties go to the smaller label (first
/// encountered in the row-major scan). `None` when there is no foreground.
pub fn largest_component(labels: &LabelMap) -> Option<BinaryImage> {
    if labels.count == 0 {
        return None;
    }
    let sizes = labels.sizes();
    let mut best = 0usize;
    for (i, &s) in sizes.iter().enumerate() {
        if s > sizes[best] {
            best = i;
        }
    }
    Some(labels.mask_of(best as u32 + 1))
}
