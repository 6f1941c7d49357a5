# Physics package initialization
