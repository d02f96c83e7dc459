# Magic package - combinatorics of magical configurations on fullerenes
