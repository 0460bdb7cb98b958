from stablecoin_redemption_controller.cli import main

if __name__ == '__main__':
    main()
